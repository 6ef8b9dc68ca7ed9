#!/usr/bin/env python3
"""Independent exact oracle for generalized Kuhn poker.

Walks the betting tree for every ordered deal with exact fractions and
computes best responses by enumerating each card's pure plans. Prints the
threshold strategy's NashConv for n = 3..50 as `n numerator denominator`.
"""
from fractions import Fraction as F
import math
import sys


def fl(a, b):
    return a // b


def cl(a, b):
    return -((-a) // b)


def threshold_profile(n):
    bet = {}
    # first round, A
    lo_f, lo_c, lo = fl(n - 1, 9), cl(n - 1, 9), F(n - 1, 9)
    hi_f, hi_c, hi = fl(2 * n + 4, 3), cl(2 * n + 4, 3), F(2 * n + 4, 3)
    for x in range(1, n + 1):
        if x <= lo_f:
            p = F(1)
        elif x == lo_c:
            p = lo - lo_f
        elif x >= hi_c:
            p = F(1)
        elif x == hi_f:
            p = hi_c - hi
        else:
            p = F(0)
        bet[x] = p
    call = {}
    c_f, c_c, c = fl(n - 1, 3), cl(n - 1, 3), F(n - 1, 3)
    for y in range(1, n + 1):
        if y >= c_c:
            p = F(1)
        elif y == c_f:
            p = c_c - c
        else:
            p = F(0)
        call[y] = p
    bchk = {}
    l_f, l_c, l = fl(n - 1, 6), cl(n - 1, 6), F(n - 1, 6)
    h_f, h_c, h = fl(n + 3, 2), cl(n + 3, 2), F(n + 3, 2)
    for y in range(1, n + 1):
        if y <= l_f:
            p = F(1)
        elif y == l_c:
            p = l - l_f
        elif y >= h_c:
            p = F(1)
        elif y == h_f:
            p = h_c - h
        else:
            p = F(0)
        bchk[y] = p
    acall = {}
    m_f, m_c, m = fl(n + 5, 3), cl(n + 5, 3), F(n + 5, 3)
    for x in range(1, n + 1):
        if x >= m_c:
            p = F(1)
        elif x == m_f:
            p = m_c - m
        else:
            p = F(0)
        acall[x] = p
    return bet, call, bchk, acall


def deal_value(x, y, bet, call, bchk, acall):
    """A's payoff for one deal under behavioural probabilities."""
    s = 1 if x > y else -1
    v_bet = call * 2 * s + (1 - call) * 1
    v_check = bchk * (acall * 2 * s + (1 - acall) * (-1)) + (1 - bchk) * s
    return bet * v_bet + (1 - bet) * v_check


def ev(n, prof):
    bet, call, bchk, acall = prof
    tot = F(0)
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            if x != y:
                tot += deal_value(x, y, bet[x], call[y], bchk[y], acall[x])
    return tot / (n * (n - 1))


def br_a(n, prof):
    _, call, bchk, _ = prof
    tot = F(0)
    for x in range(1, n + 1):
        plans = [(1, 0), (0, 1), (0, 0)]  # bet / check-call / check-fold
        best = None
        for pb, pc in plans:
            v = sum(deal_value(x, y, F(pb), call[y], bchk[y], F(pc))
                    for y in range(1, n + 1) if y != x)
            best = v if best is None or v > best else best
        tot += best
    return tot / (n * (n - 1))


def br_b(n, prof):
    """Best-response value for B (B's own payoff)."""
    bet, _, _, acall = prof
    tot = F(0)
    for y in range(1, n + 1):
        best = None
        for pc in (0, 1):
            for pb in (0, 1):
                v = sum(-deal_value(x, y, bet[x], F(pc), F(pb), acall[x])
                        for x in range(1, n + 1) if x != y)
                best = v if best is None or v > best else best
        tot += best
    return tot / (n * (n - 1))


def alpha_profile(alpha):
    a = F(alpha)
    bet = {1: a / 3, 2: F(0), 3: a}
    call = {1: F(0), 2: F(1, 3), 3: F(1)}
    bchk = {1: F(1, 3), 2: F(0), 3: F(1)}
    acall = {1: F(0), 2: a / 3 + F(1, 3), 3: F(1)}
    return bet, call, bchk, acall


if __name__ == "__main__":
    for al in ("0", "1/4", "1/2", "3/4", "1"):
        p = alpha_profile(F(al))
        print("alpha", al, "ev", ev(3, p), "nashconv", br_a(3, p) + br_b(3, p), file=sys.stderr)
    for n in range(3, 51):
        p = threshold_profile(n)
        nc = br_a(n, p) + br_b(n, p)
        print(n, nc.numerator, nc.denominator, f"{float(nc):.6g}", ev(n, p))

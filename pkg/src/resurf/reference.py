"""Frozen reference values that ``verify-tables`` recomputes.

Rationals are kept as strings so the tables read the same way they print.
"""

# case -> (c_max, c_min, delta) for every row whose bounds differ by at least 2
WIDE_BOUNDS = {
    24: ("5/2", "1/2", "2"),
    38: ("5/2", "1/2", "2"),
    53: ("5/2", "1/2", "2"),
    57: ("5/2", "1/2", "2"),
    58: ("5/2", "1/2", "2"),
    61: ("5/2", "1/2", "2"),
    41: ("8/3", "1/2", "13/6"),
    42: ("3", "1/2", "5/2"),
    59: ("8/3", "1/2", "13/6"),
    60: ("3", "1/2", "5/2"),
}

# T = A3 + A2 + A1 (fibers I4, IV, III)
WORKED_BOUNDS = (("A3", "A2", "A1"), ("13/6", "1/2"))

# rank-1 torsion-free cases: first two gap numbers
R1_FIRST_GAPS = {
    43: (1, 4),
    45: (8, 11),
    46: (2, 5),
    47: (12, 16),
    49: (3, 7),
    50: (6, 11),
    55: (16, 20),
    56: (22, 27),
}

# k = 1 decided by a multiple of a minimal section: case -> (mu, lower end, squares)
INTERVAL_SQUARES = {
    20: ("1/6", "13", (4,)),
    27: ("2/3", "4", (2,)),
    29: ("1/6", "12", (4,)),
    31: ("2/15", "16", (4,)),
    37: ("1/12", "22", (5,)),
    40: ("1/6", "10", (4,)),
    53: ("1/6", "9", (3,)),
    59: ("1/12", "16", (4, 5, 6)),
    61: ("1/6", "9", (3,)),
}

# minimal norms checked against their own source
MINIMAL_NORMS = {43: "1/2", 55: "1/20", 20: "1/6", 27: "2/3"}

# n -> (x1, x2, x3, x4) with x1^2+x2^2+x3^2+x4^2-x1x2-x2x3-x3x4 = n
CRITICAL_INTEGER_WITNESSES = {
    1: (1, 0, 0, 0),
    2: (1, 0, 1, 0),
    3: (1, 1, 2, 0),
    5: (1, 0, 2, 0),
    6: (1, 1, -2, -1),
    7: (1, 1, -2, 0),
    10: (1, 0, 3, 0),
    13: (2, 0, 3, 0),
    14: (1, 2, 5, 1),
    15: (1, 5, 5, 2),
    17: (1, 0, 4, 0),
    19: (1, 5, 3, -1),
    21: (1, 5, 0, 0),
    22: (1, 5, 0, -1),
    23: (1, 6, 6, 2),
    26: (1, 0, 5, 0),
    29: (2, 0, 5, 0),
    30: (1, 5, 0, -3),
    31: (1, 3, -4, -2),
    34: (3, 0, 5, 0),
    35: (1, 2, -2, 4),
    37: (1, 0, 6, 0),
    42: (1, 1, -4, 3),
    58: (3, 0, 7, 0),
    93: (1, 1, -10, 0),
    110: (1, -2, 3, -8),
    145: (1, 0, 12, 0),
    203: (1, -5, -9, 8),
    290: (1, 0, 17, 0),
}

# route that settles k = 1 for each positive-rank case
ONE_GAP_ROUTES = {
    **{c: "norm-4-narrow" for c in list(range(1, 20)) + list(range(21, 27))
       + [30, 32, 33, 34, 35, 36, 38, 41, 42, 46, 52, 54, 60]},
    **{c: "norm-2-torsion" for c in (28, 39, 44, 48, 51, 57, 58)},
    **{c: "r1-criterion" for c in (45, 47, 49, 50, 55, 56)},
    **{c: "interval-square" for c in (20, 27, 29, 31, 37, 40, 53, 61)},
    59: "special-witness",
    43: "gap",
}

# case 55: square-search interval for k, as functions of k
CASE55_INTERVAL = ("40k-4", "40k+25")

# Printed values that the recomputation contradicts, with the value that
# holds.  verify-tables requires the printed value to be wrong and the
# corrected one to be right, so a stale entry here is caught as well.
CORRECTIONS = {
    # the stored vector gives 111; flipping the sign of x2 gives 93
    ("critical_witness", 93): (1, -1, -10, 0),
    # the printed pairs skip an earlier gap: its square n^2 lies in the
    # interval but mu*n is integral, so nP is in the narrow lattice and
    # meets O fewer times
    ("r1_first_gaps", 45): (4, 8),
    ("r1_first_gaps", 47): (7, 12),
    ("r1_first_gaps", 55): (10, 16),
    ("r1_first_gaps", 56): (15, 22),
}

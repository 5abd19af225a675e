"""Published reference values for the bundled fixtures, keyed by (problem, N, constellation)."""

# squared effective minimum distance per receiver, R1 first
D2 = {
    ("seven_msg", 4, "psk"): [16, 8, 8, 0.61, 0.61, 0.61, 0.61],
    ("seven_msg", 4, "qam"): [12.8, 6.4, 6.4, 1.6, 1.6, 1.6, 1.6],
    ("six_msg_a", 4, "psk"): [16, 4.94, 2.34, 2.34, 0.61, 0.61],
    ("six_msg_b", 3, "psk"): [6, 1.76, 1.76, 1.76, 1.76, 1.76],
    ("five_msg", 3, "psk"): [12, 6, 1.76, 1.76, 1.76],
    ("five_msg", 4, "psk"): [16, 8, 0.61, 0.61, 0.61],
    ("five_msg", 5, "psk"): [20, 8.05, 0.76, 0.76, 0.19],
    ("four_msg", 2, "psk"): [8, 4, 4, 4],
    ("four_msg", 3, "psk"): [12, 6, 1.76, 1.76],
    ("four_msg", 4, "psk"): [16, 4.94, 2.34, 2.34],
}

# (sicg dB, acg dB) per receiver; bandwidth gain per table
GAINS = {
    ("seven_msg", 4, "psk"): ([14.19, 11.19, 11.19, 0, 0, 0, 0], [6.02, 3.01, 3.01, -8.16, -8.16, -8.16, -8.16], 2),
    ("six_msg_a", 4, "psk"): ([14.19, 9.08, 5.84, 5.84, 0, 0], [6.02, 0.92, -2.33, -2.33, -8.16, -8.16], 2),
    ("six_msg_b", 3, "psk"): ([5.33, 0, 0, 0, 0, 0], [1.77, -3.56, -3.56, -3.56, -3.56, -3.56], 1.5),
}

# pairwise distance distribution of one effective signal set (d2, pairs)
HISTOGRAM_SIX_MSG_B = {
    "R1": [(6, 4), (12, 2)],
    "R2": [(1.76, 4), (10.24, 2), (12, 2)],
    "R3": [(1.76, 8), (6, 8), (10.24, 8), (12, 4)],
    "R4": [(1.76, 8), (6, 8), (10.24, 8), (12, 4)],
    "R5": [(1.76, 8), (6, 8), (10.24, 8), (12, 4)],
    "R6": [(1.76, 8), (6, 8), (10.24, 8), (12, 4)],
}

# eta per receiver for the five-message problem at each code length
ETA_FIVE_MSG = {3: [1, 2, 3, 3, 3], 4: [1, 2, 3, 4, 4], 5: [1, 2, 3, 4, 5]}

# known code bits (0-based) and eta for the seven-message problem
S_SEVEN_MSG = [{1, 2, 3}, {2, 3}, {2, 3}, set(), set(), set(), set()]
ETA_SEVEN_MSG = [1, 2, 2, 4, 4, 4, 4]

MINRANK = {"seven_msg": 4, "six_msg_a": 4, "five_msg": 3, "four_msg": 2}

PUBLISHED_CODES = [("seven_msg", 4), ("six_msg_a", 4), ("six_msg_b", 3), ("five_msg", 3), ("four_msg", 2)]

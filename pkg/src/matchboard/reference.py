"""Published reference values for the counting sequences, frozen here so
tests and the verify suites can compare against them exactly."""

# pattern-avoiding matchings |M_n(tau)|, n = 1..10
TABLE_MATCHINGS = {
    "231": (1, 3, 14, 83, 570, 4318, 35068, 299907, 2668994, 24513578),
    "123": (1, 3, 14, 84, 594, 4719, 40898, 379236, 3711916, 37975756),
    "132": (1, 3, 14, 84, 595, 4750, 41541, 390566, 3895957, 40835749),
}

# pattern-avoiding set partitions |P_n(tau)|, n = 0..11
TABLE_PARTITIONS = {
    "231": (1, 1, 2, 5, 15, 52, 202, 858, 3909, 18822, 94712, 493834),
    "123": (1, 1, 2, 5, 15, 52, 202, 859, 3930, 19095, 97566, 520257),
    "132": (1, 1, 2, 5, 15, 52, 202, 859, 3930, 19096, 97593, 520694),
}

# matchings avoiding a pair of patterns, by equivalence class, n = 1..7
TABLE_PAIR_CLASSES = {
    "I": (1, 3, 13, 67, 381, 2307, 14589),
    "II_III": (1, 3, 13, 66, 364, 2112, 12688),
    "IV": (1, 3, 13, 63, 313, 1563, 7813),
    "V": (1, 3, 13, 68, 399, 2528, 16916),
    "VI": (1, 3, 13, 69, 414, 2697, 18625),
    "VII": (1, 3, 13, 66, 363, 2091, 12407),
}

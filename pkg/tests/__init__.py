# Bound used by every three-group construction: all interval ends are integers at B = 960
B = 960.0

# Small bound of the worked examples
SMALL_B = 8.0

# Comparison slack for float sums
EPS = 1e-9

# Seeds of the fuzz loops
FUZZ_SEEDS = range(1000)

DEFAULT_Q = 0.05
DEFAULT_SCREENING_LEVEL = 0.05
DEFAULT_PRECISION = 6

POS_INF = float("inf")
NEG_INF = float("-inf")
POS_INF_TEXT = "+inf"
NEG_INF_TEXT = "-inf"
MISSING_TEXT = "NA"
TRUE_TEXT = "true"
FALSE_TEXT = "false"

# recognised input columns
P_COLUMN = "p"
Z_COLUMN = "z"
SET_COLUMN = "set"
ADJUSTED_COLUMN = "adjusted_p"
REJECTED_COLUMN = "rejected"

POSITIVE_SET = "positive"
NEGATIVE_SET = "negative"

# Wald interval multiplier
CI_Z = 1.96

THREADS_ENV = "FDRKIT_THREADS"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

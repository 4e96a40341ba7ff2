import sys

raise RuntimeError("boom on " + sys.argv[1])

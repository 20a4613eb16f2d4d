import os

from dotenv import load_dotenv

load_dotenv()

SAMPLES = int(os.getenv("NAMBU_SAMPLES", "64"))
TOLERANCE = float(os.getenv("NAMBU_TOL", "1e-9"))
SEED = int(os.getenv("NAMBU_SEED", "20240601"))
OVERSAMPLE = int(os.getenv("NAMBU_OVERSAMPLE", "10"))

RK4_STEP = float(os.getenv("NAMBU_STEP", "1e-3"))

LIE_ORDER = int(os.getenv("NAMBU_LIE_ORDER", "12"))
NODE_LIMIT = int(os.getenv("NAMBU_NODE_LIMIT", "1000000"))
MAX_MAGNITUDE = float(os.getenv("NAMBU_MAX_MAGNITUDE", "1e12"))

NEWTON_TOL = float(os.getenv("NAMBU_NEWTON_TOL", "1e-12"))
NEWTON_MAXITER = int(os.getenv("NAMBU_NEWTON_MAXITER", "50"))

LOG_LEVEL = os.getenv("NAMBU_LOG_LEVEL", "WARNING")

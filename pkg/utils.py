from contextlib import contextmanager
import logging
import time

logger = logging.getLogger(__name__)


@contextmanager
def timer(name="Block"):
    start = time.perf_counter()
    yield
    end = time.perf_counter()
    logger.info(f"{name} took {end - start:.4f} seconds")

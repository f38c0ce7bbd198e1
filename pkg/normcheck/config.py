"""
Limits and their environment overrides
"""
import logging
import os

logger = logging.getLogger("normcheck")

NODE_CAP_VARIABLE = "NORMCHECK_NODE_CAP"


class Limits():
    EXPLORE_NODE_CAP = 100000
    TABLEAU_NODE_BUDGET = 1000000
    ENUMERATION_BITS = 24
    DEFAULT_HORIZON = 6
    THREADS_LIMIT = 8
    # and/or/not/implication (or O/P) operators in one formula
    FORMULA_CONNECTIVES = 128


def node_cap(default: int) -> int:
    """
    Returns the node cap set through `NORMCHECK_NODE_CAP`, or `default` when it is unset or invalid
    """
    value = os.environ.get(NODE_CAP_VARIABLE)
    if value is None:
        return default
    try:
        cap = int(value.strip())
    except ValueError:
        logger.debug("Ignoring {variable}={value!r}: not an integer".format(variable=NODE_CAP_VARIABLE, value=value))
        return default
    if cap <= 0:
        logger.debug("Ignoring {variable}={value!r}: not positive".format(variable=NODE_CAP_VARIABLE, value=value))
        return default
    return cap


def resolve_cap(explicit, default: int) -> int:
    """An explicit cap wins over the environment, which wins over the default"""
    if explicit is not None:
        return int(explicit)
    return node_cap(default)

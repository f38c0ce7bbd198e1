"""
normcheck\n
Parse, run and explore frame-based norms, and check their deontic logic reading for contradictions.

© normcheck contributors, 2026
"""

from normcheck.norms.core import check_wellformed, ground_model
from normcheck.norms.engine import apply, detect_conflicts, enabled, explore, run
from normcheck.norms.parser import parse_model, parse_trace, serialize_model
from normcheck.sdl.chisholm import chisholm_encodings, chisholm_report
from normcheck.sdl.formula import normalize, parse_formula, sdl_parse
from normcheck.sdl.kripke import check_model, enumerate_models
from normcheck.sdl.tableau import consistent, entails

__version_tuple__ = (1, 0, 0)


def __version_string__():
    if isinstance(__version_tuple__[-1], str):
        return '.'.join(map(str, __version_tuple__[:-1])) + __version_tuple__[-1]
    return '.'.join(str(i) for i in __version_tuple__)


__author__ = 'normcheck contributors'
__copyright__ = 'Copyright 2026, normcheck'
__credits__ = ['normcheck contributors']
__license__ = 'GNU General Public License v3 (GPLv3)'
__version__ = 'normcheck v{}'.format(__version_string__())
__maintainer__ = 'normcheck contributors'
__email__ = ''
__status__ = 'Beta'

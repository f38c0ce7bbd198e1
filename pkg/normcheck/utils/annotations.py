"""
Make backward compatible annotations, plus the aliases shared by the norm and SDL modules
"""
from sys import version_info

if version_info < (3, 9):
    from typing import Tuple, List, Dict, FrozenSet
else:
    List = list
    Tuple = tuple
    Dict = dict
    FrozenSet = frozenset

# parameter name -> object constant
Binding = Dict[str, str]
# ordered (parameter name, object constant) pairs, hashable form of a Binding
BindingItems = Tuple[Tuple[str, str], ...]

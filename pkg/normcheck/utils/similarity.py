"""
Evaluating strings similarity, used to suggest names in diagnostics
"""

from collections import Counter
from math import sqrt
from operator import itemgetter

from normcheck.utils.annotations import List, Tuple


class StringVector():
    def __init__(self, string: str) -> None:
        self.string = str(string)
        self.counter = Counter(self.string)
        self.set = set(self.counter)
        self.length = sqrt(sum(char_count ** 2 for char_count in self.counter.values()))

    def __repr__(self) -> str:
        return "Vector: " + self.string


def fuzzy_search(candidates: List[str], query: str) -> Tuple[str, float]:
    """
    Finds the most similar string among `candidates`

    Returns (None, 0) when there is no candidate
    """
    results_dict = {}
    input_query = StringVector(query)
    for vector in (StringVector(candidate) for candidate in sorted(set(candidates))):
        summation = sum(vector.counter[character] * input_query.counter[character] for character in vector.set.intersection(input_query.set))
        length = vector.length * input_query.length
        similarity = (0 if length == 0 else summation / length)
        results_dict[vector] = similarity
    if not results_dict:
        return None, 0
    best_result = max(results_dict.items(), key=itemgetter(1))[0]  # first one wins on ties (sorted order)
    return best_result.string, results_dict[best_result]


def suggestion(candidates: List[str], query: str, threshold: float = 0.6) -> str:
    """
    Returns a ' (did you mean `x`?)' suffix when a candidate is similar enough, else an empty string
    """
    guess, similarity = fuzzy_search(candidates, query)
    if guess is None or similarity < threshold:
        return ""
    return " (did you mean `{guess}`?)".format(guess=guess)

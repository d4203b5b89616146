# -*- coding: utf-8 -*-
import itertools

from conzero.engine import Seq


def naive_zero_window(seq, weights):
    """
    The first zero window (start, end) found by trying every window and
    every weight assignment, ordered by end and then by start.
    """
    n = seq.modulus
    terms = seq.terms
    for end in range(len(terms)):
        for start in range(end + 1):
            window = terms[start:end + 1]
            for choice in itertools.product(weights.elements, repeat=len(window)):
                if sum(a * x for a, x in zip(choice, window)) % n == 0:
                    return (start, end)
    return None


def naive_reach(seq, weights):
    n = seq.modulus
    return set(
        sum(a * x for a, x in zip(choice, seq.terms)) % n
        for choice in itertools.product(weights.elements, repeat=len(seq))
    )


def all_sequences(n, length):
    for terms in itertools.product(range(n), repeat=length):
        yield Seq(n, terms)

"""Transformations over the sample records."""

from data import PLAIN


def run_pipeline(count):
    squares = [i * i for i in range(count)]
    labels = {i: 'odd' if i % 2 else 'even' for i in squares}
    uniques = {i % 3 for i in squares}
    total = sum(i for i in squares)
    pick = lambda *xs: max(xs) if xs else 0
    return pick(total, len(labels), len(uniques), *PLAIN)

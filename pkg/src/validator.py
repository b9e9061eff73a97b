import re
from fractions import Fraction
from typing import Union

from sympy import factorint, isprime


class InputValidator:
    """Validator for document fields and run bounds."""

    RATIONAL_PATTERN = r'^-?\d+(/\d+)?$'
    PLACE_PATTERN = r'^(inf|\d+)$'

    @staticmethod
    def validate_rational(text: str) -> bool:
        """Validate an exact rational written as "a" or "a/b" with b > 0."""
        if not isinstance(text, str) or not re.match(InputValidator.RATIONAL_PATTERN, text):
            return False
        if '/' in text and int(text.split('/')[1]) == 0:
            return False
        return True

    @staticmethod
    def validate_lowest_terms(text: str) -> bool:
        """Validate that a rational string is already in lowest terms."""
        if not InputValidator.validate_rational(text):
            return False
        return str(Fraction(text)) == text

    @staticmethod
    def validate_place(text: str) -> bool:
        """Validate a place of Q: "inf" or a prime."""
        if not isinstance(text, str) or not re.match(InputValidator.PLACE_PATTERN, text):
            return False
        return text == 'inf' or isprime(int(text))

    @staticmethod
    def validate_prime(p: int) -> bool:
        return isinstance(p, int) and not isinstance(p, bool) and isprime(p)

    @staticmethod
    def validate_prime_power(q: int) -> bool:
        """Validate a prime power q = p^k with k >= 1."""
        if not isinstance(q, int) or isinstance(q, bool) or q < 2:
            return False
        return len(factorint(q)) == 1

    @staticmethod
    def validate_positive(value: Union[int, str]) -> bool:
        """Validate a positive integer bound."""
        try:
            return int(value) > 0 and not isinstance(value, bool)
        except (TypeError, ValueError):
            return False

    @staticmethod
    def validate_rank(rank: int, maximum: int) -> bool:
        return InputValidator.validate_positive(rank) and int(rank) <= maximum

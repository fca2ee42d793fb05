"""Noncommutative F4 Groebner bases in free algebras."""

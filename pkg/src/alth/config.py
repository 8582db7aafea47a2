"""Budgets and windows shared by the library entry points and the CLI."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Caps:
    theory: int = 20000  # elements of hom(n, 1) a clone may reach
    enumeration: int = 500_000  # candidate algebras tried per carrier size
    assoc_limit: int = 64  # largest |T(T(n))| for the direct associativity square
    listing: int = 50  # witnesses printed before truncating


@dataclass(frozen=True)
class Windows:
    monad: int = 3  # monad checks run on the sets 0..monad
    profunctor: int = 2  # FinCard window for profunctor checks
    coend: int = 4  # FinCard objects a profunctor coend ranges over
    max_carrier: int = 3
    eleutheric_value: int = 3  # largest |T(J)| in the exhaustive sweep
    eleutheric_set: int = 3  # largest |V|


@dataclass(frozen=True)
class Config:
    caps: Caps = Caps()
    windows: Windows = Windows()
    seed: int = 0
    coequalizer_samples: int = 100


DEFAULT = Config()

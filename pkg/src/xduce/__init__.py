"""String transducers, comparison-free polyregular functions and their analysis."""

from .core import (
    Alphabet,
    AlphabetError,
    BoundError,
    Dfa,
    FreeMorphism,
    ValidationError,
    apply_morphism,
    count_occurrences,
    dfa_accepts,
    word,
)
from .monoid import RegAssignment, compose_assignments, dagger_apply, erase, is_copyless
from .sst import SequentialTransducer, Sst, run_sequential, run_sst
from .hdt0l import Hdt0lSystem, run_hdt0l
from .cfpt import BudgetExhausted, Cfpt, run_cfpt
from .cfp import Cbs, Concat, Cond, Pipeline, Reg, eval_cfp, evaluate, rank_bound

__version__ = "0.1.0"

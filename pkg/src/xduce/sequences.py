"""Unary-input transductions as word sequences.

A polynomial word expression is built from literals, concatenation and an
n-fold star; ``[[e*]](n) = [[e]](n)^n``.  A pumping family describes the
sequence n -> f(a^n) by p expressions, one per residue modulo p, plus the
first p values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping

from .core import AlphabetError, ValidationError
from .cfp import Cbs, CfpExpr, Concat, Cond, Reg, eval_cfp, rank_bound
from .monoid import erase, idempotent_power
from .sst import Sst, check_copyless, run_sst, transition_image, transition_morphism


class Pwe:
    pass


@dataclass(frozen=True)
class Lit(Pwe):
    word: tuple

    def __init__(self, word=()):
        object.__setattr__(self, "word", tuple(word))


@dataclass(frozen=True)
class Cat(Pwe):
    left: Pwe
    right: Pwe


@dataclass(frozen=True)
class Star(Pwe):
    body: Pwe


EPS = Lit(())


def cat(*parts) -> Pwe:
    """Concatenation with adjacent literals merged and empty literals dropped."""
    flat = []
    for p in parts:
        stack = [p]
        while stack:
            x = stack.pop()
            if isinstance(x, Cat):
                stack.append(x.right)
                stack.append(x.left)
            elif isinstance(x, Lit) and not x.word:
                continue
            elif isinstance(x, Lit) and flat and isinstance(flat[-1], Lit):
                flat[-1] = Lit(flat[-1].word + x.word)
            else:
                flat.append(x)
    if not flat:
        return EPS
    out = flat[-1]
    for x in reversed(flat[:-1]):
        out = Cat(x, out)
    return out


def star(e: Pwe) -> Pwe:
    if isinstance(e, Lit) and not e.word:
        return EPS
    return Star(e)


def eval_pwe(e: Pwe, n: int) -> tuple:
    if isinstance(e, Lit):
        return e.word
    if isinstance(e, Cat):
        return eval_pwe(e.left, n) + eval_pwe(e.right, n)
    if isinstance(e, Star):
        return eval_pwe(e.body, n) * n
    raise TypeError(f"not an expression: {e!r}")


def star_height(e: Pwe) -> int:
    if isinstance(e, Lit):
        return 0
    if isinstance(e, Cat):
        return max(star_height(e.left), star_height(e.right))
    return 1 + star_height(e.body)


def normalize_literals(e: Pwe) -> Pwe:
    """Same expression with every literal of length at most one."""
    if isinstance(e, Lit):
        if len(e.word) <= 1:
            return e
        out = Lit(e.word[-1:])
        for s in reversed(e.word[:-1]):
            out = Cat(Lit((s,)), out)
        return out
    if isinstance(e, Cat):
        return Cat(normalize_literals(e.left), normalize_literals(e.right))
    return Star(normalize_literals(e.body))


def substitute_pwe(e: Pwe, family: Mapping) -> Pwe:
    """Replace every letter i of e by the expression family[i]."""

    def go(x):
        if isinstance(x, Lit):
            if not x.word:
                return EPS
            (i,) = x.word
            if i not in family:
                raise AlphabetError(f"no substitute for letter {i!r}")
            return family[i]
        if isinstance(x, Cat):
            return cat(go(x.left), go(x.right))
        return star(go(x.body))

    return go(normalize_literals(e))


def stretch_pwe(e: Pwe, c: int, d: int) -> Pwe:
    """An expression whose value at n is the value of e at c*n + d."""
    if c < 1 or d < 0:
        raise ValidationError("stretch needs c >= 1 and d >= 0")
    if isinstance(e, Lit):
        return e
    if isinstance(e, Cat):
        return cat(stretch_pwe(e.left, c, d), stretch_pwe(e.right, c, d))
    body = stretch_pwe(e.body, c, d)
    return cat(star(cat(*[body] * c)), *[body] * d)


@dataclass(frozen=True)
class PumpingFamily:
    period: int
    initial: tuple
    exprs: tuple

    def __post_init__(self):
        if self.period < 1:
            raise ValidationError("period must be positive")
        if len(self.exprs) != self.period or len(self.initial) != self.period:
            raise ValidationError("a family needs exactly `period` expressions and initial values")

    def at(self, index: int) -> tuple:
        if index < self.period:
            return self.initial[index]
        n, m = divmod(index, self.period)
        return eval_pwe(self.exprs[m], n - 1)

    def star_height(self) -> int:
        return max(star_height(e) for e in self.exprs)

    def synced(self, p: int) -> "PumpingFamily":
        """The same sequence described with period p (a multiple of the period)."""
        if p % self.period:
            raise ValidationError(f"{p} is not a multiple of the period {self.period}")
        c = p // self.period
        exprs = []
        for m in range(p):
            q, m0 = divmod(m, self.period)
            exprs.append(stretch_pwe(self.exprs[m0], c, c + q - 1))
        return PumpingFamily(p, tuple(self.at(i) for i in range(p)), tuple(exprs))


class SelfCheckError(AssertionError):
    """An extracted family disagrees with direct evaluation."""


def _self_check(fam: PumpingFamily, direct, check_n: int):
    for m in range(fam.period):
        if fam.at(m) != direct(m):
            raise SelfCheckError(f"initial value {m} disagrees")
        for n in range(check_n + 1):
            index = (n + 1) * fam.period + m
            if eval_pwe(fam.exprs[m], n) != direct(index):
                raise SelfCheckError(f"residue {m}, n = {n} (index {index}) disagrees")


def _unary_letter(alphabet):
    if len(alphabet) != 1:
        raise AlphabetError(f"expected a unary input alphabet, got {list(alphabet)}")
    return alphabet.symbols[0]


def extract_pumping_family(t: Sst, check_n: int = 8) -> PumpingFamily:
    """Pumping family of n -> t(a^n) for a copyless unary SST.

    With e = phi(a)^m idempotent, after a^(m+k) the run sits in a state q
    that the block a^m maps back to itself.  Writing gamma for the
    assignment of that block, each register is either dead (gamma sends it
    to a constant) or live (gamma(r) = u_r r v_r with u_r, v_r over output
    letters and dead registers).  Once a block has been applied the dead
    registers hold their constants, which gives closed forms for every
    later index.  If some dead register does not already hold its constant
    after a^(m+k), the first block is special and the period doubles.
    """
    a = _unary_letter(t.input_alphabet)
    if not check_copyless(t):
        raise ValidationError("pumping extraction needs a copyless SST")
    phi = transition_morphism(t, erased=True)
    mu = phi.images[a]
    m = idempotent_power(mu, phi.monoid.mul)
    block = transition_image(t, (a,) * m)
    cases = []
    for k in range(m):
        q, vals = t.register_values((a,) * (m + k))
        q2, gamma = block(q)
        if q2 != q:
            raise SelfCheckError("idempotent block does not return to its state")
        shape = erase(gamma)
        live, dead = [], []
        for r in t.registers:
            if r in shape[r]:
                live.append(r)
            elif shape[r]:
                raise SelfCheckError(f"register {r} is neither live nor dead")
            else:
                dead.append(r)
        for r in live:
            if any(x in live for x in shape[r] if x != r):
                raise SelfCheckError("live register reads another live register")
        cases.append((q, vals, gamma, live, dead))
    doubled = any(vals[r] != gamma[r] for _, vals, gamma, _, dead in cases for r in dead)
    p = 2 * m if doubled else m

    def split(gamma, r):
        img = gamma[r]
        i = img.index(r)
        return img[:i], img[i + 1:]

    exprs = [None] * p
    for k, (q, vals, gamma, live, dead) in enumerate(cases):
        consts = {r: gamma[r] for r in dead}

        def fill(w, env):
            out = []
            for s in w:
                out.extend(env[s] if s in env else (s,))
            return tuple(out)

        for t_ in range(2 if doubled else 1):
            env = {}
            for r in dead:
                env[r] = Lit(consts[r])
            for r in live:
                u, v = split(gamma, r)
                big_u, big_v = fill(u, consts), fill(v, consts)
                if doubled:
                    core = fill(u, vals) + vals[r] + fill(v, vals)
                    env[r] = cat(star(Lit(big_u * 2)), Lit(big_u * t_ + core + big_v * t_),
                                 star(Lit(big_v * 2)))
                else:
                    env[r] = cat(star(Lit(big_u)), Lit(vals[r]), star(Lit(big_v)))
            out = [env[s] if s in env else Lit((s,)) for s in t.output[q]]
            exprs[t_ * m + k] = cat(*out)
    initial = tuple(run_sst(t, (a,) * i) for i in range(p))
    fam = PumpingFamily(p, initial, tuple(exprs))
    _self_check(fam, lambda i: run_sst(t, (a,) * i), check_n)
    return fam


def _rho_shape(dfa, a):
    """Tail length and cycle length of the DFA run on a, aa, aaa, ..."""
    seen = {}
    q, i = dfa.initial, 0
    while q not in seen:
        seen[q] = i
        q = dfa.step(q, a)
        i += 1
    return seen[q], i - seen[q]


def _family(e: CfpExpr, a) -> PumpingFamily:
    if isinstance(e, Reg):
        return extract_pumping_family(e.machine, check_n=2)
    if isinstance(e, Cbs):
        outer = _family(e.outer, a)
        subs = {i: _family(g, a) for i, g in e.subs.items()}
        p = lcm(outer.period, *(f.period for f in subs.values()))
        outer = outer.synced(p)
        subs = {i: f.synced(p) for i, f in subs.items()}
        exprs = tuple(substitute_pwe(outer.exprs[m], {i: f.exprs[m] for i, f in subs.items()})
                      for m in range(p))
    elif isinstance(e, Concat):
        left, right = _family(e.left, a), _family(e.right, a)
        p = lcm(left.period, right.period)
        left, right = left.synced(p), right.synced(p)
        exprs = tuple(cat(x, y) for x, y in zip(left.exprs, right.exprs))
    elif isinstance(e, Cond):
        then, orelse = _family(e.then, a), _family(e.orelse, a)
        tail, cycle = _rho_shape(e.lang, a)
        p = lcm(then.period, orelse.period, cycle)
        if p < tail:
            p *= -(-tail // p)
        then, orelse = then.synced(p), orelse.synced(p)
        exprs = tuple(then.exprs[m] if e.lang.accepts((a,) * (p + m)) else orelse.exprs[m]
                      for m in range(p))
    else:
        raise TypeError(f"not an expression: {e!r}")
    initial = tuple(eval_cfp(e, (a,) * i) for i in range(p))
    return PumpingFamily(p, initial, exprs)


def extract_cfp_family(e: CfpExpr, check_n: int = 6, max_rank: int = 4) -> PumpingFamily:
    a = _unary_letter(e.input_alphabet)
    if rank_bound(e) > max_rank:
        raise ValidationError(f"rank bound {rank_bound(e)} exceeds the configured bound {max_rank}")
    fam = _family(e, a)
    _self_check(fam, lambda i: eval_cfp(e, (a,) * i), check_n)
    return fam


def beta_blocks(w, c) -> set:
    """Lengths k such that w = x c^k y with x not ending and y not starting with c."""
    w = tuple(w)
    out = set()
    n = len(w)
    if any((i == 0 or w[i - 1] != c) and (i == n or w[i] != c) for i in range(n + 1)):
        out.add(0)
    run = 0
    for x in w + (None,):
        if x == c:
            run += 1
        else:
            if run:
                out.add(run)
            run = 0
    return out


def _poly(*coeffs) -> tuple:
    coeffs = [Fraction(x) for x in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _padd(p, q):
    n = max(len(p), len(q))
    return _poly(*((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)))


@dataclass(frozen=True)
class PolySet:
    polys: frozenset

    def at(self, n) -> set:
        return {sum(x * Fraction(n) ** i for i, x in enumerate(p)) for p in self.polys}

    def covers(self, values, n) -> bool:
        return set(Fraction(v) for v in values) <= self.at(n)

    def sorted(self) -> list:
        return sorted(self.polys, key=lambda p: (len(p), p))


def poly_uniform_sets(e: Pwe, c) -> PolySet:
    """A finite polynomial set covering the c-block lengths of [[e]](n).

    Literals are split into single letters first, so that blocks running
    across a literal boundary are accounted for by the sums.
    """

    def go(x):
        if isinstance(x, Lit):
            return {_poly(k) for k in beta_blocks(x.word, c)} | {_poly()}
        if isinstance(x, Cat):
            left, right = go(x.left), go(x.right)
            return {_padd(p, q) for p in left for q in right}
        body = go(x.body)
        return body | {(Fraction(0),) + p if p else p for p in body}

    return PolySet(frozenset(go(normalize_literals(e))))

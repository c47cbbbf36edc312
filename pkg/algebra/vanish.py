"""Deciding whether H^i_Ī(R̄) vanishes.

Two routes to the same answer:

* baseline: the kernel chain ker β_1 ⊆ ker β_2 ⊆ ... computed with Gröbner
  bases over the complexes K•(R̄; f̄^(p^j)), until ker β_r = ker β_(r+1); then
  the module vanishes iff ker β_r is everything.
* streaming: with a bound u ≥ r, the module vanishes iff β_u = 0, and β_u = 0
  iff α_u(x^ī m̃_t) is a coboundary of the base complex for every box offset ī
  and every generator t. Each α value is streamed with flat memory.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import msgspec

from algebra.errors import (
    BoundResolutionError,
    ContractViolation,
    InternalConsistencyError,
    LocohError,
    VerdictMismatchError,
)
from algebra.fparith import check_prime
from algebra.freemod import (
    INFINITE,
    FreeElem,
    PolyMatrix,
    buchberger,
    collect_gb_stats,
    preimage_kernel,
    submodule_contains,
    submodule_equal,
)
from algebra.frobstream import (
    FrobLayout,
    MonomialTally,
    StreamCounters,
    alpha_on_generator,
    product_forms,
)
from algebra.koszul import (
    KoszulComplex,
    PresentedModule,
    apply_chain_map,
    beta_chain_map,
    build_koszul,
    cohomology_presentation,
)
from algebra.polyring import IntPoly, Poly, PolyRing, reduce_mod_p

logger = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 4


class Result(str, Enum):
    VANISHES = "VANISHES"
    NONVANISHING = "NONVANISHING"
    INCONCLUSIVE = "INCONCLUSIVE"


class Mode(str, Enum):
    STREAMING = "streaming"
    BASELINE = "baseline"
    COMPARE = "compare"


class BoundSource(str, Enum):
    USER = "user"
    FINITE_LENGTH = "finite_length"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class BoundSpec:
    source: BoundSource
    value: int | None = None

    def __post_init__(self):
        if self.source is BoundSource.USER and (self.value is None or self.value < 1):
            raise ContractViolation("a user bound must be a positive integer")

    def __str__(self) -> str:
        if self.source is BoundSource.USER:
            return f"user:{self.value}"
        return self.source.value.replace("_", "-")


def parse_bound(text: str) -> BoundSpec:
    """'user:<u>', 'finite-length' or 'empirical'."""
    text = text.strip().lower()
    if text.startswith("user:"):
        try:
            return BoundSpec(BoundSource.USER, int(text[5:]))
        except ValueError:
            raise ContractViolation(f"bad user bound {text!r}") from None
    if text in ("finite-length", "finite_length"):
        return BoundSpec(BoundSource.FINITE_LENGTH)
    if text == "empirical":
        return BoundSpec(BoundSource.EMPIRICAL)
    raise ContractViolation(f"unknown bound {text!r}; expected user:<u>, finite-length or empirical")


# ---------- verdicts ----------

class Witness(msgspec.Struct, frozen=True):
    j: int
    offset: tuple[int, ...]
    generator: int


class Counters(msgspec.Struct):
    peak_live_monomials: int = 0
    max_degree: int = 0
    degree_bound: int = 0
    tuples: int = 0
    compositions: int = 0
    compositions_pruned: int = 0
    terms: int = 0
    gb_bases: int = 0
    gb_largest: int = 0
    spairs_reduced: int = 0
    spairs_skipped: int = 0
    kernel_steps: int = 0


class Verdict(msgspec.Struct):
    result: Result
    mode: Mode
    witness: Witness | None = None
    r: int | None = None
    u: int | None = None
    bound: str | None = None
    per_prime_bound: bool = False
    reason: str | None = None
    warnings: list[str] = msgspec.field(default_factory=list)
    counters: Counters = msgspec.field(default_factory=Counters)
    timings: dict[str, float] = msgspec.field(default_factory=dict)


# ---------- instances ----------

@dataclass
class KernelChain:
    r: int | None
    kernels: list[list[FreeElem]]
    stabilized: bool
    everything: bool = False


@dataclass
class Instance:
    name: str
    int_generators: tuple[IntPoly, ...]
    p: int
    degree: int
    ring: PolyRing
    generators: tuple[Poly, ...]
    complex: KoszulComplex
    module: PresentedModule
    check: bool = True
    warnings: list[str] = field(default_factory=list)
    _chains: dict[int, KernelChain] = field(default_factory=dict, repr=False)

    @property
    def s(self) -> int:
        return len(self.generators)

    @property
    def trivially_vanishing(self) -> bool:
        return self.module.is_zero


def build_instance(
    f: Sequence[IntPoly],
    p: int,
    i: int,
    names: Sequence[str] | None = None,
    name: str = "",
    check: bool = True,
) -> Instance:
    check_prime(p)
    if not f:
        raise ContractViolation("an instance needs at least one generator")
    nvars = f[0].nvars
    if any(g.nvars != nvars for g in f):
        raise ContractViolation("generators in different numbers of variables")
    if not 0 <= i <= len(f):
        raise ContractViolation(f"cohomological degree {i} outside 0..{len(f)}")
    ring = PolyRing(nvars, p, names=tuple(names or ()))
    gens = tuple(reduce_mod_p(g, ring) for g in f)
    warnings = []
    for k, g in enumerate(gens):
        if g.is_zero():
            msg = f"degenerate generator mod p: f{k + 1} reduces to 0 mod {p}"
            logger.warning(msg)
            warnings.append(msg)
    K = build_koszul(gens, 1, check=check)
    M = cohomology_presentation(K, i)
    logger.info("instance %s: p=%d i=%d, %d generators of H^%d", name or "?", p, i, len(M.generators), i)
    return Instance(name, tuple(f), p, i, ring, gens, K, M, check, warnings)


# ---------- streamed β_j test ----------

@dataclass
class StreamResult:
    is_zero: bool
    witness: Witness | None = None
    tuples: int = 0


def _alpha_value(inst: Instance, witness_j: int, offset, t: int, forms=None, counters=None, tally=None) -> FreeElem:
    layout = FrobLayout(inst.ring, witness_j)
    gen = inst.module.generators[t].element
    return alpha_on_generator(inst.complex, inst.degree, gen, tuple(offset), layout, forms, counters, tally)


def beta_j_is_zero_streamed(
    inst: Instance,
    j: int,
    counters: StreamCounters | None = None,
    tally: MonomialTally | None = None,
) -> StreamResult:
    """β_j = 0 iff α_j(x^ī m̃_t) is a coboundary for all ī in the box and all t.

    Tuples (ī, t) are visited lexicographically; the first failure is the witness.
    Nothing computed for one tuple survives into the next.
    """
    M = inst.module
    if M.is_zero:
        return StreamResult(True)
    counters = counters if counters is not None else StreamCounters()
    tally = tally if tally is not None else MonomialTally()
    layout = FrobLayout(inst.ring, j)
    K, i = inst.complex, inst.degree
    forms = [product_forms(K, i, g.element) for g in M.generators]
    d_i = K.differential(i)
    tuples = 0
    for offset in layout.box():
        for t, gen in enumerate(M.generators):
            tuples += 1
            z = alpha_on_generator(K, i, gen.element, offset, layout, forms[t], counters, tally)
            if inst.check and not d_i.apply(z).is_zero():
                raise InternalConsistencyError(f"α_{j} of generator {t + 1} at {offset} is not a cocycle")
            if not M.coboundaries.contains(z):
                logger.debug("β_%d != 0: witness offset %s, generator %d", j, offset, t + 1)
                return StreamResult(False, Witness(j, tuple(offset), t), tuples)
    return StreamResult(True, tuples=tuples)


def streamed_profile(inst: Instance, j_max: int) -> list[tuple[int, bool]]:
    """The streamed test for j = 1..j_max."""
    return [(j, beta_j_is_zero_streamed(inst, j).is_zero) for j in range(1, j_max + 1)]


# ---------- baseline kernel chain ----------

def _combine(coeffs: FreeElem, cocycles: Sequence[FreeElem], zero: FreeElem) -> FreeElem:
    out = zero
    for t, c in coeffs.components.items():
        out = out + cocycles[t] * c
    return out


def _kernel_of_beta(inst: Instance, j: int) -> list[FreeElem]:
    """Cocycles z with β•_j(z) a coboundary of K•(R̄; f̄^(p^j))."""
    K, i, M = inst.complex, inst.degree, inst.module
    target = build_koszul(inst.generators, inst.p**j, check=inst.check)
    cm = beta_chain_map(K, j, check=inst.check, target=target)
    rank = K.rank(i)
    target_cob = buchberger(target.differential(i - 1).columns(), ring=inst.ring, rank=rank,
                            provenance=f"im d^{i - 1} at level p^{j}")
    cocycles = M.cocycles
    phi = PolyMatrix.from_columns(inst.ring, rank, [apply_chain_map(cm, z, i) for z in cocycles])
    zero = FreeElem.zero(inst.ring, rank)
    kernel = [_combine(c, cocycles, zero) for c in preimage_kernel(phi, target_cob)]
    return [z for z in kernel if z]


def baseline_kernel_chain(inst: Instance, max_steps: int = DEFAULT_MAX_STEPS) -> KernelChain:
    """ker β_j for j = 1, 2, ... until ker β_r = ker β_(r+1), r <= max_steps.

    Level max_steps + 1 is computed anyway to test stabilization; if it is
    already all of M̄ the chain ends there with r = max_steps + 1.
    """
    if max_steps < 1:
        raise ContractViolation("max_steps must be positive")
    if max_steps in inst._chains:
        return inst._chains[max_steps]
    M = inst.module
    if M.is_zero:
        chain = KernelChain(1, [], True, True)
        inst._chains[max_steps] = chain
        return chain
    cob = list(M.coboundaries.basis)
    cocycles = M.cocycles
    kernels: list[list[FreeElem]] = []
    chain = KernelChain(None, kernels, False)
    for j in range(1, max_steps + 2):
        ker = _kernel_of_beta(inst, j)
        kernels.append(ker)
        logger.debug("ker β_%d: %d generators", j, len(ker))
        if j >= 2:
            prev = kernels[-2]
            if not submodule_contains(ker + cob, prev):
                raise InternalConsistencyError(f"kernel chain not ascending at j={j}")
            if submodule_equal(prev + cob, ker + cob):
                everything = submodule_contains(prev + cob, cocycles)
                chain = KernelChain(j - 1, kernels, True, everything)
                break
        if submodule_contains(ker + cob, cocycles):
            # ker β_j = M̄ forces ker β_(j+1) = M̄, also at the level past the budget
            chain = KernelChain(j, kernels, True, True)
            break
    if not chain.stabilized:
        logger.warning("kernel chain did not stabilize within %d steps", max_steps)
    inst._chains[max_steps] = chain
    return chain


# ---------- bounds ----------

def resolve_bound(inst: Instance, spec: BoundSpec, max_steps: int = DEFAULT_MAX_STEPS) -> int:
    if spec.source is BoundSource.USER:
        return spec.value
    if spec.source is BoundSource.FINITE_LENGTH:
        length = inst.module.length()
        if length == INFINITE:
            raise BoundResolutionError(
                f"H^{inst.degree} of the Koszul complex has infinite length: some variable has no "
                "pure-power leading term in the relation module"
            )
        return max(1, int(length))
    chain = baseline_kernel_chain(inst, max_steps)
    if not chain.stabilized:
        raise BoundResolutionError(f"empirical bound: kernel chain did not stabilize within {max_steps} steps")
    logger.warning("empirical bound u=%d holds for p=%d only", chain.r, inst.p)
    return chain.r


# ---------- top level ----------

def _streaming(inst: Instance, spec: BoundSpec, max_steps: int, verdict: Verdict) -> None:
    started = time.perf_counter()
    try:
        u = resolve_bound(inst, spec, max_steps)
    except BoundResolutionError as exc:
        verdict.result = Result.INCONCLUSIVE
        verdict.reason = str(exc)
        return
    finally:
        verdict.timings["bound"] = time.perf_counter() - started
    verdict.u = u
    verdict.per_prime_bound = spec.source is not BoundSource.USER
    if spec.source is BoundSource.EMPIRICAL:
        verdict.r = u
    counters, tally = StreamCounters(), MonomialTally()
    started = time.perf_counter()
    outcome = beta_j_is_zero_streamed(inst, u, counters, tally)
    verdict.timings["streaming"] = time.perf_counter() - started
    c = verdict.counters
    c.peak_live_monomials = tally.peak
    c.max_degree = counters.max_degree
    c.degree_bound = counters.degree_bound
    c.tuples = outcome.tuples
    c.compositions = counters.compositions
    c.compositions_pruned = counters.compositions_pruned
    c.terms = counters.terms
    if outcome.is_zero:
        verdict.result = Result.VANISHES
    else:
        verdict.result = Result.NONVANISHING
        verdict.witness = outcome.witness


def _baseline(inst: Instance, max_steps: int, verdict: Verdict) -> None:
    started = time.perf_counter()
    chain = baseline_kernel_chain(inst, max_steps)
    verdict.timings["baseline"] = time.perf_counter() - started
    verdict.counters.kernel_steps = len(chain.kernels)
    if not chain.stabilized:
        verdict.result = Result.INCONCLUSIVE
        verdict.reason = f"kernel chain did not stabilize within {max_steps} steps"
        return
    verdict.r = chain.r
    verdict.result = Result.VANISHES if chain.everything else Result.NONVANISHING
    if chain.r > max_steps:
        verdict.warnings.append(f"kernel chain reached the whole module at j={chain.r}, past max_steps={max_steps}")


def decide_vanishing(
    inst: Instance,
    spec: BoundSpec,
    mode: Mode | str = Mode.STREAMING,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> Verdict:
    mode = Mode(mode)
    verdict = Verdict(Result.INCONCLUSIVE, mode, bound=str(spec), warnings=list(inst.warnings))
    if inst.trivially_vanishing:
        verdict.result = Result.VANISHES
        verdict.reason = f"H^{inst.degree} of the Koszul complex is zero"
        verdict.r = 1
        return verdict
    with collect_gb_stats() as gb:
        if mode is Mode.STREAMING:
            _streaming(inst, spec, max_steps, verdict)
        elif mode is Mode.BASELINE:
            _baseline(inst, max_steps, verdict)
        else:
            base = Verdict(Result.INCONCLUSIVE, Mode.BASELINE)
            _baseline(inst, max_steps, base)
            _streaming(inst, spec, max_steps, verdict)
            verdict.timings.update(base.timings)
            verdict.warnings.extend(base.warnings)
            verdict.counters.kernel_steps = base.counters.kernel_steps
            if Result.INCONCLUSIVE in (base.result, verdict.result):
                reasons = [x for x in (verdict.reason, base.reason) if x]
                verdict.result = Result.INCONCLUSIVE
                verdict.reason = "; ".join(reasons) or None
            elif base.result != verdict.result:
                raise VerdictMismatchError(
                    f"streaming says {verdict.result.value}, baseline says {base.result.value} "
                    f"(p={inst.p}, i={inst.degree})"
                )
            verdict.r = base.r
    c = verdict.counters
    c.gb_bases, c.gb_largest = gb.bases, gb.largest_basis
    c.spairs_reduced, c.spairs_skipped = gb.spairs_reduced, gb.spairs_skipped
    logger.info("%s: %s (mode %s, u=%s, r=%s)", inst.name or "instance", verdict.result.value,
                mode.value, verdict.u, verdict.r)
    return verdict


def recheck_witness(inst: Instance, verdict: Verdict) -> bool:
    """Recompute the witnessed α value from scratch and test it against fresh coboundaries."""
    w = verdict.witness
    if w is None:
        raise ContractViolation("verdict carries no witness to recheck")
    layout = FrobLayout(inst.ring, w.j)
    if not layout.in_box(w.offset):
        raise ContractViolation(f"witness offset {w.offset} outside the box for j={w.j}")
    if not 0 <= w.generator < len(inst.module.generators):
        raise ContractViolation(f"witness generator {w.generator} out of range")
    K, i = inst.complex, inst.degree
    fresh = buchberger(K.differential(i - 1).columns(), ring=inst.ring, rank=K.rank(i))
    z = _alpha_value(inst, w.j, w.offset, w.generator)
    return not fresh.contains(z)


def decide(
    generators: Sequence[IntPoly],
    p: int,
    i: int,
    bound: BoundSpec | str = "finite-length",
    mode: Mode | str = Mode.STREAMING,
    max_steps: int = DEFAULT_MAX_STEPS,
    names: Sequence[str] | None = None,
    name: str = "",
) -> Verdict:
    """build_instance + decide_vanishing; errors while deciding fold into an INCONCLUSIVE verdict."""
    spec = parse_bound(bound) if isinstance(bound, str) else bound
    inst = build_instance(generators, p, i, names=names, name=name)
    try:
        return decide_vanishing(inst, spec, mode, max_steps)
    except VerdictMismatchError:
        raise
    except LocohError as exc:
        return Verdict(Result.INCONCLUSIVE, Mode(mode), bound=str(spec), reason=str(exc), warnings=list(inst.warnings))

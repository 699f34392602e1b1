"""Session engine: quantum transmission, sifting, error estimation, distillation.

A session is a pure function of its :class:`SessionConfig` (seed
included).  One :class:`~qkdsim.rng.Rng` drives everything in a fixed
per-slot draw order -- sender bit, sender alphabet (BB84 only), source
multi-photon draw, tap draws, flip draw, loss draw, receiver alphabet
and measurement (delivered pulses only) -- followed by the estimation
sample, reconciliation and amplification draws.  The noise-free mode is
the same engine with all noise probabilities at zero.

Transcript message kinds (sender, tag):

* bob ``alphabets`` -- one character per slot: ``+``/``x``, or ``-`` for
  a slot with no reception (BB84).
* alice ``kept`` -- ascending slots surviving the sift (BB84).
* bob ``conclusive`` -- ascending slots with a conclusive readout (B92).
* bob ``sample`` / alice+bob ``sample-bits`` -- error-estimation
  disclosure.
* alice ``perm`` / ``parity`` / bob ``subset`` / ``parity`` -- see
  :mod:`qkdsim.distill`.
* alice ``pa-subset`` -- amplification subset indices.
* alice ``abort`` -- the measured rate, when estimation aborts the run.
"""

import math
import time
from dataclasses import dataclass, field

from .alphabets import b92_alphabet, oblique_alphabet, vh_alphabet
from .channel import NoiseModel, PublicTranscript, emit_pulse, transmit
from .distill import (
    ReconcileParams,
    apply_subsets,
    leaked_bits_bound,
    privacy_amplify,
    reconcile,
)
from .errors import EmptySiftedKey, KeyExhausted, RestartRequired
from .eve import EntanglingEve, EveTap, NoEve, TranslucentEve, eve_guess
from .otp import bits_to_string
from .quantum import (
    Ket4,
    PovmOutcome,
    build_povm,
    measure_povm,
    measure_povm_carrier,
    measure_projective,
)
from .rng import Rng

ALPHABET_CHARS = ("+", "x")  # index = alphabet coin value


@dataclass(frozen=True, eq=False)
class SessionConfig:
    """Everything that defines one protocol run."""

    protocol: str
    n_pulses: int
    theta: float = math.pi / 8
    noise: NoiseModel = field(default_factory=NoiseModel)
    eve: object = field(default_factory=NoEve)
    sample_fraction: float = 0.1
    r_max: float = 0.12
    reconcile: ReconcileParams = field(default_factory=ReconcileParams)
    sec_param: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.protocol not in ("bb84", "b92"):
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if self.n_pulses < 1:
            raise ValueError("n_pulses must be at least 1")
        if not 0.0 < self.sample_fraction < 1.0:
            raise ValueError("sample_fraction must lie in (0, 1)")
        if not 0.0 <= self.r_max <= 1.0:
            raise ValueError("r_max must lie in [0, 1]")
        if self.sec_param < 0:
            raise ValueError("sec_param must be non-negative")
        if isinstance(self.eve, (TranslucentEve, EntanglingEve)):
            if self.protocol != "b92":
                raise ValueError("translucent strategies apply to the b92 protocol only")
            if abs(self.eve.theta - self.theta) > 1e-12:
                raise ValueError("strategy theta differs from the session theta")
            if self.noise.multi_p > 0.0:
                raise ValueError("translucent strategies assume single-photon pulses")


@dataclass
class Stage1Record:
    """Per-slot outcome of the quantum stage (parallel lists, one entry per slot)."""

    protocol: str
    alice_bits: list
    received: list
    bob_bits: list  # None where not received / inconclusive
    alice_alphabets: list | None = None  # BB84: coin values, 0="+" 1="x"
    bob_alphabets: list | None = None
    outcomes: list | None = None  # B92: PovmOutcome per received slot

    @property
    def n_slots(self) -> int:
        return len(self.alice_bits)


@dataclass(frozen=True)
class SiftResult:
    raw_alice: list
    raw_bob: list
    slots: list


@dataclass
class RunReport:
    """Summary statistics of a completed (or aborted) session."""

    protocol: str
    n_pulses: int
    seed: int
    sifted_count: int = 0
    disclosed_count: int = 0
    error_rate: float | None = None
    aborted: bool = False
    abort_reason: str | None = None
    reconciled_length: int | None = None
    leaked_bits: int | None = None
    final_key_length: int = 0
    final_key_alice: str = ""
    final_key_bob: str = ""
    eve_guess_accuracy: float | None = None
    eve_final_key_info_estimate: float | None = None
    timings: dict = field(default_factory=dict)


def make_tap(cfg: SessionConfig, rng: Rng):
    """Build the channel tap for the configured strategy; None when Eve is absent."""
    if isinstance(cfg.eve, NoEve):
        return None
    return EveTap(cfg.eve, cfg.protocol, rng, theta=cfg.theta)


def run_stage1_bb84(cfg: SessionConfig, rng: Rng, tap) -> Stage1Record:
    """Quantum stage of BB84: coin-flipped bits and alphabets, one pulse per slot."""
    alphabets = (vh_alphabet(), oblique_alphabet())
    alice_bits = []
    alice_alphas = []
    bob_alphas = []
    bob_bits = []
    received = []
    for slot in range(cfg.n_pulses):
        bit = rng.coin()
        alpha = rng.coin()
        alice_bits.append(bit)
        alice_alphas.append(alpha)
        pulse = emit_pulse(slot, alphabets[alpha].encode(bit), cfg.noise, rng)
        delivered = transmit(pulse, cfg.noise, tap, rng)
        if delivered is None:
            received.append(False)
            bob_alphas.append(None)
            bob_bits.append(None)
            continue
        b_alpha = rng.coin()
        bob_alphas.append(b_alpha)
        bit_out, _ = measure_projective(delivered.state, alphabets[b_alpha].basis, rng)
        bob_bits.append(bit_out)
        received.append(True)
    return Stage1Record(
        "bb84",
        alice_bits,
        received,
        bob_bits,
        alice_alphabets=alice_alphas,
        bob_alphabets=bob_alphas,
    )


def run_stage1_b92(cfg: SessionConfig, rng: Rng, tap) -> Stage1Record:
    """Quantum stage of B92: one alphabet, POVM receiver per delivered pulse."""
    alphabet = b92_alphabet(cfg.theta)
    povm = build_povm(cfg.theta)
    alice_bits = []
    received = []
    outcomes = []
    bob_bits = []
    for slot in range(cfg.n_pulses):
        bit = rng.coin()
        alice_bits.append(bit)
        pulse = emit_pulse(slot, alphabet.encode(bit), cfg.noise, rng)
        delivered = transmit(pulse, cfg.noise, tap, rng)
        if delivered is None:
            received.append(False)
            outcomes.append(None)
            bob_bits.append(None)
            continue
        if isinstance(delivered.state, Ket4):
            # Entangled tap: the carrier is read through the POVM and the
            # probe residual goes back to the eavesdropper's record.
            outcome, residual = measure_povm_carrier(delivered.state, povm, rng)
            tap.record.set_probe(slot, residual)
        else:
            outcome = measure_povm(delivered.state, povm, rng)
        received.append(True)
        outcomes.append(outcome)
        if outcome == PovmOutcome.INCONCLUSIVE:
            bob_bits.append(None)
        else:
            bob_bits.append(int(outcome))
    return Stage1Record("b92", alice_bits, received, bob_bits, outcomes=outcomes)


def sift_bb84(record: Stage1Record, transcript: PublicTranscript) -> SiftResult:
    """Keep received slots with matching alphabets; announce everything needed.

    Bob posts his per-slot alphabet (with ``-`` marking non-receptions),
    Alice posts the kept slots.  Keys come out in ascending slot order.
    """
    chars = []
    for got, alpha in zip(record.received, record.bob_alphabets):
        chars.append(ALPHABET_CHARS[alpha] if got else "-")
    transcript.post("bob", "alphabets", "".join(chars))
    kept = [
        slot
        for slot in range(record.n_slots)
        if record.received[slot] and record.alice_alphabets[slot] == record.bob_alphabets[slot]
    ]
    transcript.post("alice", "kept", ",".join(map(str, kept)))
    if not kept:
        raise EmptySiftedKey("no slot survived sifting")
    raw_alice = [record.alice_bits[s] for s in kept]
    raw_bob = [record.bob_bits[s] for s in kept]
    return SiftResult(raw_alice, raw_bob, kept)


def sift_b92(record: Stage1Record, transcript: PublicTranscript) -> SiftResult:
    """Keep slots with conclusive readouts, announced by Bob."""
    kept = [
        slot
        for slot in range(record.n_slots)
        if record.received[slot] and record.outcomes[slot] != PovmOutcome.INCONCLUSIVE
    ]
    transcript.post("bob", "conclusive", ",".join(map(str, kept)))
    if not kept:
        raise EmptySiftedKey("no conclusive slot survived sifting")
    raw_alice = [record.alice_bits[s] for s in kept]
    raw_bob = [record.bob_bits[s] for s in kept]
    return SiftResult(raw_alice, raw_bob, kept)


def estimate_error(raw_alice, raw_bob, fraction, rng, transcript, r_max=None):
    """Disclose a random sample of the raw keys and estimate the error rate.

    The sample positions (ceil(fraction * len), drawn from the shared
    session stream) and both parties' sample bits go on the transcript;
    the disclosed positions are then deleted from both keys.

    Returns
    -------
    (rate, tentative_alice, tentative_bob)

    Raises
    ------
    RestartRequired
        When ``r_max`` is given and the measured rate exceeds it.  The
        exception carries the rate; an abort notice goes on the
        transcript.
    """
    if len(raw_alice) != len(raw_bob) or not raw_alice:
        raise ValueError("raw keys must be non-empty and equally long")
    n = len(raw_alice)
    m = math.ceil(fraction * n)
    sample = rng.sample_positions(n, m)
    transcript.post("bob", "sample", ",".join(map(str, sample)))
    bits_a = [raw_alice[i] for i in sample]
    bits_b = [raw_bob[i] for i in sample]
    transcript.post("alice", "sample-bits", bits_to_string(bits_a))
    transcript.post("bob", "sample-bits", bits_to_string(bits_b))
    disagreements = sum(1 for a, b in zip(bits_a, bits_b) if a != b)
    rate = disagreements / m
    if r_max is not None and rate > r_max:
        transcript.post("alice", "abort", repr(rate))
        raise RestartRequired(rate)
    chosen = set(sample)
    tent_a = [b for i, b in enumerate(raw_alice) if i not in chosen]
    tent_b = [b for i, b in enumerate(raw_bob) if i not in chosen]
    return rate, tent_a, tent_b


def _eve_accuracy(tap, transcript, sift: SiftResult):
    if tap is None:
        return None
    guesses = eve_guess(tap.record, transcript)
    if not guesses:
        return None
    alice_by_slot = dict(zip(sift.slots, sift.raw_alice))
    hits = sum(1 for slot, (bit, _) in guesses.items() if alice_by_slot.get(slot) == bit)
    return hits / len(guesses)


def run_session(cfg: SessionConfig) -> RunReport:
    """Execute a full session: stage 1, sifting, estimation, distillation.

    Aborts (threshold exceeded, empty sift, exhausted key) produce a
    report with ``aborted=True`` and a reason; they are protocol
    outcomes, not errors.
    """
    started = time.perf_counter()
    rng = Rng(cfg.seed)
    transcript = PublicTranscript()
    tap = make_tap(cfg, rng)
    report = RunReport(cfg.protocol, cfg.n_pulses, cfg.seed)
    report._transcript = transcript

    def finish():
        report.timings = {"total_seconds": time.perf_counter() - started}
        return report

    if cfg.protocol == "bb84":
        record = run_stage1_bb84(cfg, rng, tap)
    else:
        record = run_stage1_b92(cfg, rng, tap)

    try:
        sift = sift_bb84(record, transcript) if cfg.protocol == "bb84" else sift_b92(record, transcript)
    except EmptySiftedKey:
        report.aborted = True
        report.abort_reason = "empty_sifted_key"
        return finish()

    report.sifted_count = len(sift.slots)
    try:
        rate, tent_a, tent_b = estimate_error(
            sift.raw_alice, sift.raw_bob, cfg.sample_fraction, rng, transcript, r_max=cfg.r_max
        )
    except RestartRequired as abort:
        report.disclosed_count = math.ceil(cfg.sample_fraction * report.sifted_count)
        report.error_rate = abort.rate
        report.eve_guess_accuracy = _eve_accuracy(tap, transcript, sift)
        report.aborted = True
        report.abort_reason = "error_rate_exceeds_threshold"
        return finish()

    report.disclosed_count = report.sifted_count - len(tent_a)
    report.error_rate = rate
    report.eve_guess_accuracy = _eve_accuracy(tap, transcript, sift)

    rec_a, rec_b, acct = reconcile(tent_a, tent_b, rate, cfg.reconcile, rng, transcript)
    report.reconciled_length = len(rec_a)
    k = leaked_bits_bound(rate, len(rec_a), acct)
    report.leaked_bits = k
    try:
        final_a, subsets = privacy_amplify(rec_a, k, cfg.sec_param, rng, transcript, acct)
    except KeyExhausted:
        report.aborted = True
        report.abort_reason = "key_exhausted"
        return finish()
    final_b = apply_subsets(rec_b, subsets)

    report.final_key_length = len(final_a)
    report.final_key_alice = bits_to_string(final_a)
    report.final_key_bob = bits_to_string(final_b)
    report.eve_final_key_info_estimate = 2.0 ** (-cfg.sec_param) / math.log(2.0)
    return finish()


def session_transcript(report: RunReport):
    """Transcript attached to a report by :func:`run_session`."""
    return getattr(report, "_transcript", None)

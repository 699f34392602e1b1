# A full BB84 session, quiet and under attack.
#
# The sender coin-flips a bit and an alphabet per pulse; the receiver
# coin-flips his measurement alphabet.  Sifting keeps the slots where
# the alphabets agreed, a disclosed sample estimates the error rate,
# and the surviving bits are reconciled and compressed into a final key.

from qkdsim import NoiseModel, OpaqueEve, SessionConfig, run_session

# Quiet channel: the error rate is exactly zero and both parties end up
# with the same final key.
quiet = run_session(SessionConfig("bb84", 4000, seed=42))
print("quiet channel:")
print("  sifted bits      ", quiet.sifted_count)
print("  estimated error  ", quiet.error_rate)
print("  final key length ", quiet.final_key_length)
print("  keys identical   ", quiet.final_key_alice == quiet.final_key_bob)

# Some flip noise: the protocol still completes, paying bits to the
# estimator, the parity exchange, and the leak bound.
noisy = run_session(SessionConfig("bb84", 4000, noise=NoiseModel(flip_p=0.03), seed=42))
print("noisy channel (3% flips):")
print("  estimated error  ", round(noisy.error_rate, 4))
print("  reconciled length", noisy.reconciled_length)
print("  leak bound k     ", noisy.leaked_bits)
print("  final key length ", noisy.final_key_length)
print("  keys identical   ", noisy.final_key_alice == noisy.final_key_bob)

# Full interception: measuring every pulse in a random alphabet and
# resending the observed state stamps a ~25% error rate on the sifted
# key, so the estimator trips the abort threshold.
tapped = run_session(SessionConfig("bb84", 4000, eve=OpaqueEve(1.0), seed=42))
print("full interception:")
print("  estimated error  ", round(tapped.error_rate, 4), "(expect ~0.25)")
print("  aborted          ", tapped.aborted, "-", tapped.abort_reason)
print("  eavesdropper hit rate on sifted bits:", round(tapped.eve_guess_accuracy, 4))

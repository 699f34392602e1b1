# Using a distilled key as a one-time pad, and why reuse breaks it.

from qkdsim import SessionConfig, bits_from_string, bits_to_string, otp_xor, run_session

# Distill a shared key over a quiet channel.
report = run_session(SessionConfig("bb84", 3000, seed=21))
key = bits_from_string(report.final_key_alice)
print("distilled key bits:", len(key))

message = "attack at dawn"
plain = []
for ch in message.encode():
    plain.extend(int(b) for b in format(ch, "08b"))
pad = key[: len(plain)]

cipher = otp_xor(plain, pad)
print("ciphertext:", bits_to_string(cipher)[:48], "...")

# Decryption is the same XOR.
back = otp_xor(cipher, pad)
decoded = bytes(
    int(bits_to_string(back[i : i + 8]), 2) for i in range(0, len(back), 8)
).decode()
print("round trip:", decoded)

# Reusing a pad leaks the XOR of the two plaintexts -- structure an
# attacker can read.  The command-line tool keeps a fingerprint ledger
# precisely to refuse this.
other = []
for ch in b"attack at dusk":
    other.extend(int(b) for b in format(ch, "08b"))
c1, c2 = otp_xor(plain, pad), otp_xor(other, pad)
leak = otp_xor(c1, c2)
print("xor of two ciphertexts under one pad =", bits_to_string(leak)[:48], "...")
print("  equals xor of the two plaintexts:  ", bits_to_string(otp_xor(plain, other))[:48], "...")

"""Report documents and the command-line front end."""

import json
import math
import os

import pytest

from qkdsim import SessionConfig, build_document, run_session
from qkdsim.cli import main

EXPECTED_FIELDS = [
    "schema_version",
    "protocol",
    "n_pulses",
    "seed",
    "sifted_count",
    "disclosed_count",
    "error_rate",
    "aborted",
    "abort_reason",
    "reconciled_length",
    "leaked_bits",
    "final_key_length",
    "final_key_alice",
    "final_key_bob",
    "eve_guess_accuracy",
    "eve_final_key_info_estimate",
    "config_protocol",
    "config_n_pulses",
    "config_theta",
    "config_flip_p",
    "config_loss_p",
    "config_multi_p",
    "config_eve",
    "config_eve_fraction",
    "config_sample_fraction",
    "config_r_max",
    "config_block_policy",
    "config_n_clean",
    "config_max_passes",
    "config_sec_param",
    "config_seed",
    "transcript_digest",
]


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestReportDocument:
    def test_field_order_is_frozen(self):
        cfg = SessionConfig("bb84", 500, seed=150)
        doc = build_document(run_session(cfg), cfg)
        assert list(doc.keys()) == EXPECTED_FIELDS

    def test_consistency_invariant(self):
        cfg = SessionConfig("bb84", 2000, seed=151, sec_param=5)
        doc = build_document(run_session(cfg), cfg)
        assert doc["final_key_length"] == doc["reconciled_length"] - doc["leaked_bits"] - 5
        assert doc["final_key_alice"] == doc["final_key_bob"]


class TestRunCommand:
    def test_clean_run_reports_zero_error(self, capsys):
        code, out, _ = run_cli(
            capsys, ["run", "--protocol", "bb84", "--n", "2000", "--seed", "1", "--eve", "none"]
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["aborted"] is False
        assert doc["error_rate"] == 0.0

    def test_byte_identical_reports(self, capsys):
        argv = [
            "run", "--protocol", "bb84", "--n", "3000", "--seed", "9",
            "--eve", "opaque", "--eve-frac", "0.5",
        ]
        first = run_cli(capsys, argv)
        second = run_cli(capsys, argv)
        assert first == second

    def test_aborted_run_is_exit_zero(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["run", "--protocol", "bb84", "--n", "4000", "--seed", "2", "--eve", "opaque"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["aborted"] is True
        assert doc["abort_reason"] == "error_rate_exceeds_threshold"

    def test_summary_mode(self, capsys):
        code, out, _ = run_cli(
            capsys, ["run", "--n", "500", "--seed", "3", "--summary"]
        )
        assert code == 0
        assert "final key bits" in out
        with pytest.raises(json.JSONDecodeError):
            json.loads(out)

    def test_config_file_overridden_by_flags(self, capsys, tmp_path):
        cfg_file = tmp_path / "session.cfg"
        cfg_file.write_text(
            "# sample configuration\nprotocol = b92\nn = 500\nseed = 9\ntheta = 0.5\n"
        )
        code, out, _ = run_cli(capsys, ["run", "--config", str(cfg_file), "--n", "800"])
        assert code == 0
        doc = json.loads(out)
        assert doc["protocol"] == "b92"
        assert doc["n_pulses"] == 800  # flag wins
        assert doc["config_theta"] == 0.5

    def test_dump_transcript(self, capsys, tmp_path):
        path = tmp_path / "transcript.log"
        code, out, _ = run_cli(
            capsys, ["run", "--n", "300", "--seed", "4", "--dump-transcript", str(path)]
        )
        assert code == 0
        body = path.read_text()
        assert body
        for line in body.splitlines():
            sender, tag, payload_hex = line.split("\t")
            assert sender in ("alice", "bob")
            bytes.fromhex(payload_hex)

    def test_full_interception_signature(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["run", "--protocol", "bb84", "--n", "80000", "--seed", "1",
             "--eve", "opaque", "--eve-frac", "1.0"],
        )
        assert code == 0
        doc = json.loads(out)
        assert abs(doc["error_rate"] - 0.25) < 0.02

    def test_translucent_b92_run(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["run", "--protocol", "b92", "--n", "2000", "--seed", "11",
             "--eve", "translucent", "--rmax", "1.0"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["config_eve"] == "translucent"
        assert doc["eve_guess_accuracy"] is not None

    def test_usage_error_exit_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["run", "--eve", "mallory"])
        assert exc.value.code == 2

    def test_translucent_on_bb84_is_usage_error(self, capsys):
        code, out, err = run_cli(
            capsys, ["run", "--protocol", "bb84", "--eve", "translucent", "--n", "100"]
        )
        assert code == 2
        assert "b92" in err


class TestFixtureCommand:
    def test_all_fixtures_pass(self, capsys):
        for name in ("fig6a", "fig6b", "vernam"):
            code, out, _ = run_cli(capsys, ["fixture", name])
            assert code == 0
            assert out.strip().endswith("PASS")

    def test_unknown_fixture(self, capsys):
        code, _, err = run_cli(capsys, ["fixture", "fig7"])
        assert code == 2
        assert "unknown fixture" in err


class TestOtpCommand:
    def _write(self, path, data):
        path.write_bytes(data)
        return str(path)

    def test_round_trip_and_ledger(self, capsys, tmp_path):
        plain = os.urandom(1024)
        key = os.urandom(1024)
        infile = self._write(tmp_path / "plain.bin", plain)
        keyfile = self._write(tmp_path / "key.bin", key)
        cipher = tmp_path / "cipher.bin"
        back = tmp_path / "back.bin"
        ledger = tmp_path / "ledger.txt"

        code, _, _ = run_cli(
            capsys,
            ["otp", "encrypt", "--in", infile, "--key", keyfile, "--out", str(cipher), "--ledger", str(ledger)],
        )
        assert code == 0
        assert cipher.read_bytes() != plain
        lines = ledger.read_text().splitlines()
        assert len(lines) == 1
        fingerprint, stamp = lines[0].split("\t")
        assert len(fingerprint) == 64

        code, _, _ = run_cli(
            capsys,
            ["otp", "decrypt", "--in", str(cipher), "--key", keyfile, "--out", str(back), "--ledger", str(ledger)],
        )
        assert code == 0
        assert back.read_bytes() == plain
        assert len(ledger.read_text().splitlines()) == 1  # decrypt never writes

    def test_key_reuse_refused(self, capsys, tmp_path):
        key = os.urandom(64)
        infile = self._write(tmp_path / "a.bin", os.urandom(64))
        keyfile = self._write(tmp_path / "key.bin", key)
        ledger = tmp_path / "ledger.txt"
        argv = ["otp", "encrypt", "--in", infile, "--key", keyfile, "--out", str(tmp_path / "c1"), "--ledger", str(ledger)]
        assert run_cli(capsys, argv)[0] == 0
        code, _, err = run_cli(
            capsys,
            ["otp", "encrypt", "--in", infile, "--key", keyfile, "--out", str(tmp_path / "c2"), "--ledger", str(ledger)],
        )
        assert code == 3
        assert "reuse" in err
        assert len(ledger.read_text().splitlines()) == 1

    def test_length_mismatch(self, capsys, tmp_path):
        infile = self._write(tmp_path / "a.bin", b"abcdef")
        keyfile = self._write(tmp_path / "k.bin", b"ab")
        code, _, err = run_cli(
            capsys,
            ["otp", "encrypt", "--in", infile, "--key", keyfile, "--out", str(tmp_path / "c"), "--ledger", str(tmp_path / "l")],
        )
        assert code == 1
        assert "bytes" in err


class TestSweepCommand:
    def test_header_and_row_count(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["sweep", "--protocol", "bb84", "--n", "2000", "--seed", "5",
             "--vary", "flip", "--from", "0.0", "--to", "0.04", "--steps", "3"],
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "param,mean_error_rate,mean_conclusive_rate,mean_final_len,aborted_frac"
        assert len(lines) == 4

    def test_opaque_fraction_linearity(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["sweep", "--protocol", "bb84", "--n", "6000", "--seed", "6",
             "--vary", "eve-frac", "--from", "0.0", "--to", "1.0", "--steps", "5",
             "--eve", "opaque", "--repeats", "2"],
        )
        assert code == 0
        rows = [line.split(",") for line in out.strip().splitlines()[1:]]
        assert len(rows) == 5
        for row in rows:
            fraction = float(row[0])
            mean_rate = float(row[1])
            assert abs(mean_rate - fraction / 4) < 0.05
        # High-interception rows abort, and the CSV still carries them.
        assert float(rows[-1][4]) == 1.0

    def test_theta_conclusive_rate(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["sweep", "--protocol", "b92", "--n", "5000", "--seed", "7",
             "--vary", "theta", "--from", "0.15", "--to", "0.7", "--steps", "3"],
        )
        assert code == 0
        rows = [line.split(",") for line in out.strip().splitlines()[1:]]
        for row in rows:
            theta = float(row[0])
            conclusive = float(row[2])
            assert abs(conclusive - (1 - math.cos(2 * theta))) < 0.02

    def test_single_step_single_row(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["sweep", "--protocol", "bb84", "--n", "1000", "--seed", "8",
             "--vary", "flip", "--from", "0.01", "--to", "0.05", "--steps", "1"],
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 2
        assert lines[1].startswith("0.01,")

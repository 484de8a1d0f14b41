import hashlib
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from synth import write_snapshot_csv  # noqa: E402

# sha256 of the deterministic snapshot written by tests/synth.py. If this
# assert ever fires after an environment upgrade, regenerate the snapshot
# and update the pin (the generator is the committed source of truth).
SNAPSHOT_SHA256 = "377a2ce737e8a7b05a787c7465065c784b16fe92914cad3abcce84cc1c0c54f5"


@pytest.fixture(scope="session")
def snapshot_csv(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("snapshot") / "snapshot.csv"
    write_snapshot_csv(path)
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    assert digest == SNAPSHOT_SHA256, (
        f"snapshot hash drifted: {digest} != pinned {SNAPSHOT_SHA256}; "
        "the RNG stream or generator changed - regenerate the pin deliberately"
    )
    return path


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    rows = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            if getattr(report, "when", "call") != "call" and status != "error":
                continue
            if "test_acceptance" in report.nodeid:
                rows.append((report.nodeid.split("::")[-1], status))
    if not rows:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, status in sorted(rows):
        flag = "PASS" if status == "passed" else "FAIL"
        terminalreporter.write_line(f"{flag}  {name}")

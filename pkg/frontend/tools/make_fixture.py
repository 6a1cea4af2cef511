"""Regenerate test/fixtures/reference_stream.json from the reference scenario.

Usage: python3 tools/make_fixture.py   (from the frontend/ directory)

The fixture holds what a panel client would see: the snapshot served at
stream connect, every event payload in order, and the final snapshot.
"""

import json
from pathlib import Path

from holonic_workcell.gateway import Workcell, reference_scenario
from holonic_workcell.server import record_payload


def main() -> None:
    workcell = Workcell()
    initial = workcell.snapshot().to_dict()
    trace = workcell.run_script(reference_scenario())
    fixture = {
        "initial_snapshot": initial,
        "events": [record_payload(r) for r in trace.records],
        "final_snapshot": workcell.snapshot().to_dict(),
    }
    out = Path(__file__).parent.parent / "test" / "fixtures" / "reference_stream.json"
    out.write_text(json.dumps(fixture, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(fixture['events'])} events)")


if __name__ == "__main__":
    main()

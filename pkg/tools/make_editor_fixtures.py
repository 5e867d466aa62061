"""Record service responses for the editor contract tests.

Run from the repository root:  python3 tools/make_editor_fixtures.py
Writes frontend/tests/fixtures/editor_contract.json with real /v1 responses
so the frontend tests exercise the service wire format without a live server.
"""

from __future__ import annotations

import json
import warnings
from pathlib import Path

warnings.filterwarnings("ignore")

from fastapi.testclient import TestClient

from reqdsl.service import create_app

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "frontend" / "tests" / "fixtures" / "editor_contract.json"

# ten scripted drafts: a mix of corpus sentences and conformant DSL
DRAFTS = [
    "Low beam illuminant shall be LED.",
    "The frame rate of the camera is 60 Hz",
    "IF: speeding velocity is GREATER 10 km/h, THEN: the vehicle's doors MUST be closed automatically.",
    "When hazard warning is deactivated and the pit arm is in position direction blinking left or direction blinking right, the direction blinking cycle should be released.",
    "With activated darkness switch (only armored vehicles) the cornering light is not activated.",
    "The vehicles doors are closed automaticly when speeding velocity is bigger than 10km/h.",
    "The duration of a flashing cycle MUST be 1 second.",
    "Distance Warning: The vehicle warns the driver visually and/or acoustically if the vehicle is closer to the car ahead than allowed by the safety distance.",
    "The maximum curb weight of the vehicle must be no more than 3.5t.",
    "IF: the brake or the hand brake is pushed, THEN: the cruise control is deactivated until it is activated again.",
]

TRANSLATE_CASES = [
    {"text": "The frame rate of the camera is 60 Hz", "rules": ["modal_verb"], "backend": "mock"},
    {"text": "Low beam illuminant shall be LED.", "rules": ["modal_verb"], "backend": "mock"},
    {"text": "IF: x, THEN: y MUST hold.", "backend": "mock"},
]


def main() -> None:
    client = TestClient(create_app())
    validate = {}
    for draft in DRAFTS:
        response = client.post("/v1/validate", json={"text": draft})
        response.raise_for_status()
        validate[draft] = response.json()

    translate = {}
    for case in TRANSLATE_CASES:
        response = client.post("/v1/translate", json=case)
        response.raise_for_status()
        translate[case["text"]] = response.json()
        # the accepted output must re-validate; record that response too
        for stage in response.json()["stages"]:
            out = stage["output"]
            if out not in validate:
                validate[out] = client.post("/v1/validate", json={"text": out}).json()

    consistency = client.post(
        "/v1/consistency",
        json={"requirement_ids": ["xd-01", "xd-05", "xd-02", "ex-04"]},
    ).json()

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(
        json.dumps(
            {"validate": validate, "translate": translate, "consistency": consistency},
            indent=2,
            ensure_ascii=False,
        )
        + "\n",
        encoding="utf-8",
    )
    print(f"wrote {OUT} ({len(validate)} validate responses)")


if __name__ == "__main__":
    main()

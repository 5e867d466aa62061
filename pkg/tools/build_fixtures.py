"""Regenerate the bundled fixture corpus under src/reqdsl/fixtures/corpus.

Run from the repository root:  python tools/build_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "src" / "reqdsl" / "fixtures" / "corpus"

# --------------------------------------------------------------------------
# support sets

IFTHEN_PAIRS = [
    (
        "If a defective illuminant is detected, the information about the defective illuminant is transmitted to the instrument cluster.",
        "IF: defective illuminant is detected, THEN: information about the defective illuminant is transmitted to the instrument cluster.",
    ),
    (
        "If no advancing vehicle is recognized any more, the high beam illumination is restored within 2 seconds.",
        "IF: no advancing vehicle is recognized any more, THEN: high beam illumination is restored within 2 seconds.",
    ),
    (
        'If the light rotary switch is in position "auto", the adaptive high beam headlights are activated by moving the pitman arm to the back.',
        'IF: the light rotary switch is in position "auto" and the pitman arm is moved back, THEN: the adaptive high beam headlights are activated.',
    ),
    (
        "(a) When the driver enables the cruise control (by pulling the cruise control lever or by pressing the cruise control lever up or down), the vehicle maintains the set speed if possible.",
        "IF: driver enables the cruise control by pulling the cruise control lever or by pressing the cruise control lever up or down, THEN: the vehicle maintains the set speed if possible.",
    ),
    (
        "If the driver pushes down the cruise control lever with cruise control activated up to the first resistance level, the speed set point of the cruise control is reduced by N.",
        "IF: driver pushes down the cruise control lever with cruise control activated up to the first resistance level, THEN: the speed set point of the cruise control is reduced by N.",
    ),
    (
        "By pushing the brake or the hand brake, the cruise control is deactivated until it is activated again.",
        "IF: the brake or the hand brake is pushed, THEN: the cruise control is deactivated until it is activated again.",
    ),
]

MODAL_PAIRS = [
    (
        "The maximum deviation of the pulse ratio should be below the cognitive threshold of a human observer.",
        "The maximum deviation of the pulse ratio MUST be below the cognitive threshold of a human observer.",
    ),
    (
        "Direction blinking: For USA and CANADA, the daytime running light shall be dimmed by 50% during direction blinking on the blinking side.",
        "Direction blinking: For USA and CANADA, the daytime running light MUST be dimmed by 50% during direction blinking on the blinking side.",
    ),
    (
        "The adaptation of the pulse ratio has to occur at the latest after two complete flashing cycles.",
        "The adaptation of the pulse ratio MUST occur at the latest after two complete flashing cycles.",
    ),
    (
        "The duration of a flashing cycle is 1 second.",
        "The duration of a flashing cycle MUST be 1 second.",
    ),
    (
        "A flashing cycle (bright to dark) will always be completed, before a new flashing cycle can occur.",
        "A flashing cycle (bright to dark) MUST always be completed, before a new flashing cycle can occur.",
    ),
    (
        "With subvoltage the ambient light is not available.",
        "With subvoltage the ambient light MUST not be available.",
    ),
]

EXPR_PAIRS = [
    (
        "The duration of a flashing cycle is 1 second",
        "The Duration of a flashing cycle is EQUAL 1 second.",
    ),
    (
        "The maximum deviation of the pulse ratio should be below the cognitive threshold of a human observer.",
        "The maximum deviation of the pulse ratio should be LESS OR EQUAL cognitive threshold of human observer.",
    ),
    (
        "The minimal number of seatbelts used has to be 1.",
        "The number of seatbelts used has to be GREATER OR EQUAL 1.",
    ),
    (
        "The vehicles doors are closed automaticly when speeding velocity is bigger than 10km/h.",
        "The vehicles doors are closed automaticly when speeding velocity is GREATER 10km/h.",
    ),
    (
        "Also after 1000 flashing cycles the cumulated deviation must not exceed 0.05s.",
        "After 1000 flashing cycles the cumulated Deviation must be GREATER OR EQUAL 0.05s.",
    ),
    (
        "The cruising speed has to be set at a speed which exceeds 10km/h.",
        "The cruising speed has to be GREATER 10km/h.",
    ),
    (
        "The engine of the vehicle must not be louder than 70dB.",
        "The loudness of the engine must be LESS OR EQUAL 70dB.",
    ),
    (
        "The interior material is Velour.",
        "The interior material is EQUAL Velour.",
    ),
]

SUPPORT_SETS = {
    "ifthen-1": ("if_then", IFTHEN_PAIRS[:1]),
    "ifthen-4": ("if_then", IFTHEN_PAIRS[:4]),
    "ifthen-6": ("if_then", IFTHEN_PAIRS[:6]),
    "modal-1": ("modal_verb", MODAL_PAIRS[:1]),
    "modal-4": ("modal_verb", MODAL_PAIRS[:4]),
    "modal-6": ("modal_verb", MODAL_PAIRS[:6]),
    "expr-1-equal": ("expression", EXPR_PAIRS[:1]),
    "expr-1-lessorequal": ("expression", EXPR_PAIRS[1:2]),
    "expr-4": ("expression", EXPR_PAIRS[:4]),
    "expr-6": ("expression", EXPR_PAIRS[:6]),
    "expr-8": ("expression", EXPR_PAIRS[:8]),
}

# --------------------------------------------------------------------------
# test sets

IFTHEN_TESTS = [
    ("it-01", "If tip-blinking was activated shortly before deactivation of the hazard warning, this is not considered during the deactivation of the hazard warning."),
    ("it-02", "With activated darkness switch (only armored vehicles) the cornering light is not activated."),
    ("it-03", "When moving the pitman arm in position turn left the vehicle flashes all left direction indicators (front left, exterior mirror left, rear left) synchronically with pulse ratio bright to dark 1:1."),
    ("it-04", "When hazard warning is deactivated and the pit arm is in position direction blinking left or direction blinking right, the direction blinking cycle should be released."),
    ("it-05", "Distance Warning: The vehicle warns the driver visually and/or acoustically if the vehicle is closer to the car ahead than allowed by the safety distance."),
    ("it-06", "Emergency Brake Assist: The vehicle decelerates in critical situations to a full standstill."),
    ("it-07", "If the high beam is activated and an advancing vehicle is recognized, the high beam illumination is reduced to low beam within 0.5 seconds."),
    ("it-08", "If the ignition is turned off, the daytime running light is deactivated."),
    ("it-09", "When the reverse gear is engaged, the rear fog light is switched off."),
    ("it-10", "Once the vehicle exceeds walking speed, the door locks engage automatically."),
    ("it-11", "When the steering wheel is turned by more than 90 degrees, the cornering light on the corresponding side is activated."),
]

MODAL_TESTS = [
    ("mv-01", "The frame rate of the camera is 60 Hz."),
    ("mv-02", "A flashing cycle (bright to dark) has to be always completed, before a new flashing cycle can occur."),
    ("mv-03", "Also after 1000 flashing cycles the cumulated deviation will not exceed 0.05s."),
    ("mv-04", "With subvoltage, the ambient light is not available."),
    ("mv-05", "Low beam illuminant shall be LED."),
    ("mv-06", "The functions of the system are classified as safety relevant in with respect to ISO 26262."),
    ("mv-07", "The vehicle does not exceed a set speed."),
    ("mv-08", "The activation time of the hazard warning lights is 0.5 seconds."),
]

EXPR_TESTS = [
    ("ex-01", "The luminous intensity of the daytime running light must be lower than 400cd."),
    ("ex-02", "The maximum curb weight of the vehicle must be no more than 3.5t."),
    ("ex-03", "The minimun distance to a vehicle in front has to be 5m."),
    ("ex-04", "The vehicle's horn must not be louder than 50dB."),
    ("ex-05", "The seat cover material equals Alcantara."),
    ("ex-06", "The nominal on-board voltage is 12V."),
    ("ex-07", "The warning buzzer must be louder than 65dB."),
    ("ex-08", "The maximum velocity of the vehicle is 260km/h."),
]

EXTRACTION_DEMO = [
    ("xd-01", "The braking distance can not be longer than 300m."),
    ("xd-02", "The vehicles horn must not be louder than 50dB"),
    ("xd-03", "Low beam illuminant shall be LED."),
    ("xd-04", "The minimun distance to a vehicle in front has to be 5m."),
    ("xd-05", "The braking distance has to be at least 400m."),
]

TEST_SETS = {
    "ifthen-test": IFTHEN_TESTS,
    "modal-test": MODAL_TESTS,
    "expr-test": EXPR_TESTS,
    "extraction-demo": EXTRACTION_DEMO,
}

# --------------------------------------------------------------------------
# recorded outputs with human labels
# (set id, test id, output or None for identity, label)

IDENTITY = None

RECORDINGS = [
    # --- trigger/action, 1 example ---
    ("ifthen-1", "it-01", "IF: tip-blinking was activated shortly before deactivation of the hazard warning, THEN: this is not considered during the deactivation of the hazard warning.", 1),
    ("ifthen-1", "it-02", "IF: darkness switch is activated, THEN: cornering light is not activated.", 3),
    ("ifthen-1", "it-03", IDENTITY, 5),
    ("ifthen-1", "it-04", "WHEN: hazard warning is deactivated, THEN: direction blinking cycle should be released.", 6),
    ("ifthen-1", "it-05", "IF: distance warning is activated, THEN: the vehicle warns the driver visually and/or acoustically.", 6),
    ("ifthen-1", "it-06", IDENTITY, 5),
    ("ifthen-1", "it-07", IDENTITY, 5),
    ("ifthen-1", "it-08", "IF: the ignition is turned off, THEN: the daytime running light is deactivated.", 1),
    ("ifthen-1", "it-09", IDENTITY, 5),
    ("ifthen-1", "it-10", IDENTITY, 5),
    ("ifthen-1", "it-11", IDENTITY, 5),
    # --- trigger/action, 4 examples ---
    ("ifthen-4", "it-01", "IF: tip-blinking was activated shortly before deactivation of the hazard warning, THEN: this is not considered during the deactivation of the hazard warning.", 1),
    ("ifthen-4", "it-02", "IF: darkness switch is activated THEN: cornering light is not activated.", 4),
    ("ifthen-4", "it-03", "IF moving the pitman arm in position turn left, THEN: the vehicle flashes all left direction indicators (front left, exterior mirror left, rear left) synchronically with pulse ratio bright to dark 1:1.", 2),
    ("ifthen-4", "it-04", "IF: hazard warning is deactivated and the pit arm is in position direction blinking left or direction blinking right, THEN: the direction blinking cycle should be released.", 1),
    ("ifthen-4", "it-05", "IF: distance warning is activated, THEN: the vehicle warns the driver visually and/or acoustically.", 6),
    ("ifthen-4", "it-06", "IF: emergency brake assist is activated, THEN: the vehicle decelerates in critical situations to a full standstill.", 1),
    ("ifthen-4", "it-07", "IF: the high beam is activated, THEN: the high beam illumination is reduced to low beam within 0.5 seconds.", 6),
    ("ifthen-4", "it-08", "IF: the ignition is turned off, THEN: the daytime running light is deactivated.", 1),
    ("ifthen-4", "it-09", "IF: the reverse gear is engaged, THEN: the rear fog light is switched off.", 1),
    ("ifthen-4", "it-10", "If: the vehicle exceeds walking speed, THEN: the door locks engage automatically.", 2),
    ("ifthen-4", "it-11", IDENTITY, 5),
    # --- trigger/action, 6 examples ---
    ("ifthen-6", "it-01", "IF: tip-blinking was activated shortly before deactivation of the hazard warning, THEN: this is not considered during the deactivation of the hazard warning.", 1),
    ("ifthen-6", "it-02", "IF: with activated darkness switch (only armored vehicles), THEN: the cornering light is not activated.", 2),
    ("ifthen-6", "it-03", "IF: moving the pitman arm in position turn left, THEN: the vehicle flashes all left direction indicators (front left, exterior mirror left, rear left) synchronically with pulse ratio bright to dark 1:1.", 1),
    ("ifthen-6", "it-04", "IF: hazard warning is deactivated and the pit arm is in position direction blinking left or direction blinking right, THEN: the direction blinking cycle should be released.", 1),
    ("ifthen-6", "it-05", "IF: distance warning is activated, THEN: the vehicle warns the driver visually and/or acoustically.", 6),
    ("ifthen-6", "it-06", "IF: emergency brake assist is activated, THEN: the vehicle decelerates in critical situations to a full standstill.", 1),
    ("ifthen-6", "it-07", "IF: the high beam is activated, THEN: the high beam illumination is reduced to low beam within 0.5 seconds.", 6),
    ("ifthen-6", "it-08", "IF: the ignition is turned off, THEN: the daytime running light is deactivated.", 1),
    ("ifthen-6", "it-09", "IF: the reverse gear is engaged, THEN: the rear fog light is switched off.", 1),
    ("ifthen-6", "it-10", "If: the vehicle exceeds walking speed, THEN: the door locks engage automatically.", 2),
    ("ifthen-6", "it-11", "IF: by turning the steering wheel more than 90 degrees, THEN: the cornering light on the corresponding side is activated.", 2),
    # --- modal verb, 1 example ---
    ("modal-1", "mv-01", "The frame rate of the camera MUST be 60 Hz.", 1),
    ("modal-1", "mv-02", IDENTITY, 5),
    ("modal-1", "mv-03", "Also after 1000 flashing cycles the cumulated deviation MUST NOT exceed 0.05s.", 1),
    ("modal-1", "mv-04", IDENTITY, 5),
    ("modal-1", "mv-05", IDENTITY, 5),
    ("modal-1", "mv-06", IDENTITY, 5),
    ("modal-1", "mv-07", IDENTITY, 5),
    ("modal-1", "mv-08", "The activation time of the hazard warning lights MUST be 0.5 seconds.", 1),
    # --- modal verb, 4 examples ---
    ("modal-4", "mv-01", "The frame rate of the camera MUST be 60 Hz.", 1),
    ("modal-4", "mv-02", "A flashing cycle (bright to dark) MUST be always completed, before a new flashing cycle can occur.", 1),
    ("modal-4", "mv-03", "Also after 1000 flashing cycles the cumulated deviation MUST NOT exceed 0.05s.", 1),
    ("modal-4", "mv-04", "With subvoltage, the ambient light MUST not be available.", 1),
    ("modal-4", "mv-05", IDENTITY, 5),
    ("modal-4", "mv-06", IDENTITY, 5),
    ("modal-4", "mv-07", IDENTITY, 5),
    ("modal-4", "mv-08", "The activation time of the hazard warning lights MUST be 0.5 seconds.", 1),
    # --- modal verb, 6 examples ---
    ("modal-6", "mv-01", "The frame rate of the camera MUST be 60 Hz.", 1),
    ("modal-6", "mv-02", "A flashing cycle (bright to dark) MUST be always completed, before a new flashing cycle can occur.", 1),
    ("modal-6", "mv-03", "Also after 1000 flashing cycles the cumulated deviation MUST NOT exceed 0.05s.", 1),
    ("modal-6", "mv-04", "With subvoltage, the ambient light MUST not be available.", 1),
    ("modal-6", "mv-05", "Low beam illuminant MUST be LED.", 1),
    ("modal-6", "mv-06", IDENTITY, 5),
    ("modal-6", "mv-07", IDENTITY, 5),
    ("modal-6", "mv-08", "The activation time of the hazard warning lights MUST be 0.5 seconds.", 1),
    # --- logical formulae, 1 example (trained on EQUAL) ---
    ("expr-1-equal", "ex-01", "The luminous intensity of the daytime running light must be EQUAL 400cd.", 6),
    ("expr-1-equal", "ex-02", "The maximum curb weight of the vehicle must be EQUAL 3.5t.", 3),
    ("expr-1-equal", "ex-03", IDENTITY, 5),
    ("expr-1-equal", "ex-04", IDENTITY, 5),
    ("expr-1-equal", "ex-05", "The seat cover material is EQUAL Alcantara.", 1),
    ("expr-1-equal", "ex-06", "The nominal on-board voltage is EQUAL 12V.", 1),
    ("expr-1-equal", "ex-07", IDENTITY, 5),
    ("expr-1-equal", "ex-08", IDENTITY, 5),
    # --- logical formulae, 1 example (trained on LESS OR EQUAL) ---
    ("expr-1-lessorequal", "ex-01", "The luminous intensity of the daytime running light must be LESS OR EQUAL 400cd.", 3),
    ("expr-1-lessorequal", "ex-02", "The maximum curb weight of the vehicle must be LESS THAN 3.5t.", 3),
    ("expr-1-lessorequal", "ex-03", "The minimun distance to a vehicle in front has to be LESS OR EQUAL 5m.", 3),
    ("expr-1-lessorequal", "ex-04", "The vehicle's horn must be LESS OR EQUAL 50dB.", 3),
    ("expr-1-lessorequal", "ex-05", IDENTITY, 5),
    ("expr-1-lessorequal", "ex-06", IDENTITY, 5),
    ("expr-1-lessorequal", "ex-07", IDENTITY, 5),
    ("expr-1-lessorequal", "ex-08", IDENTITY, 5),
    # --- logical formulae, 4 examples ---
    ("expr-4", "ex-01", "The luminous intensity of the daytime running light must be LESS THAN 400cd.", 1),
    ("expr-4", "ex-02", "The maximum curb weight of the vehicle must be LESS THAN 3.5t.", 3),
    ("expr-4", "ex-03", "The minimun distance to a vehicle in front has to be LESS THAN 5m.", 6),
    ("expr-4", "ex-04", IDENTITY, 5),
    ("expr-4", "ex-05", "The seat cover material is LESS THAN Alcantara.", 6),
    ("expr-4", "ex-06", "The nominal on-board voltage is LESS THAN 12V.", 6),
    ("expr-4", "ex-07", IDENTITY, 5),
    ("expr-4", "ex-08", IDENTITY, 5),
    # --- logical formulae, 6 examples ---
    ("expr-6", "ex-01", "The luminous intensity of the daytime running light must be LESS 400cd.", 1),
    ("expr-6", "ex-02", "The maximum curb weight of the vehicle must be LESS OR EQUAL 3.5t.", 1),
    ("expr-6", "ex-03", "The minimun distance to a vehicle in front has to be LESS OR EQUAL 5m.", 3),
    ("expr-6", "ex-04", "The vehicle's horn must be LESS OR EQUAL 50dB.", 3),
    ("expr-6", "ex-05", IDENTITY, 5),
    ("expr-6", "ex-06", IDENTITY, 5),
    ("expr-6", "ex-07", "The warning buzzer must be GREATER 65dB.", 3),
    ("expr-6", "ex-08", "The maximum velocity of the vehicle is GREATER OR EQUAL 260km/h.", 6),
    # --- logical formulae, 8 examples ---
    ("expr-8", "ex-01", "The luminous intensity of the daytime running light must be LESS 400cd.", 1),
    ("expr-8", "ex-02", "The maximum curb weight of the vehicle must be LESS OR EQUAL 3.5t.", 1),
    ("expr-8", "ex-03", "The minimun distance to a vehicle in front has to be LESS THAN 5m.", 6),
    ("expr-8", "ex-04", IDENTITY, 5),
    ("expr-8", "ex-05", IDENTITY, 5),
    ("expr-8", "ex-06", "The nominal on-board voltage is EQUAL 12V.", 1),
    ("expr-8", "ex-07", IDENTITY, 5),
    ("expr-8", "ex-08", "The maximum velocity of the vehicle is GREATER OR EQUAL 260km/h.", 6),
]

EXPERIMENTS = [
    {"rule": "if_then", "support_set_id": "ifthen-1", "test_set_id": "ifthen-test"},
    {"rule": "if_then", "support_set_id": "ifthen-4", "test_set_id": "ifthen-test"},
    {"rule": "if_then", "support_set_id": "ifthen-6", "test_set_id": "ifthen-test"},
    {"rule": "modal_verb", "support_set_id": "modal-1", "test_set_id": "modal-test"},
    {"rule": "modal_verb", "support_set_id": "modal-4", "test_set_id": "modal-test"},
    {"rule": "modal_verb", "support_set_id": "modal-6", "test_set_id": "modal-test"},
    {"rule": "expression", "support_set_id": "expr-1-equal", "test_set_id": "expr-test", "variant": "trained on keyword: equal"},
    {"rule": "expression", "support_set_id": "expr-1-lessorequal", "test_set_id": "expr-test", "variant": "trained on keyword: less or equal"},
    {"rule": "expression", "support_set_id": "expr-4", "test_set_id": "expr-test"},
    {"rule": "expression", "support_set_id": "expr-6", "test_set_id": "expr-test"},
    {"rule": "expression", "support_set_id": "expr-8", "test_set_id": "expr-test"},
]


def main() -> None:
    (CORPUS / "requirements").mkdir(parents=True, exist_ok=True)
    (CORPUS / "support_sets").mkdir(parents=True, exist_ok=True)
    (CORPUS / "recordings").mkdir(parents=True, exist_ok=True)

    requirement_files = []
    texts: dict[tuple[str, str], str] = {}
    for set_id, rows in TEST_SETS.items():
        rel = f"requirements/{set_id}.jsonl"
        lines = []
        for req_id, text in rows:
            texts[(set_id, req_id)] = text
            lines.append(
                json.dumps(
                    {"id": req_id, "text": text, "source": "legacy", "tags": []},
                    ensure_ascii=False,
                )
            )
        (CORPUS / rel).write_text("\n".join(lines) + "\n", encoding="utf-8")
        requirement_files.append(rel)

    set_ids = []
    for set_id, (rule, pairs) in SUPPORT_SETS.items():
        meta = {"id": set_id, "rule": rule, "provenance": "bundled"}
        (CORPUS / "support_sets" / f"{set_id}.meta.json").write_text(
            json.dumps(meta, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
        pair_lines = [
            json.dumps({"input": i, "dsl": d}, ensure_ascii=False) for i, d in pairs
        ]
        (CORPUS / "support_sets" / f"{set_id}.pairs.jsonl").write_text(
            "\n".join(pair_lines) + "\n", encoding="utf-8"
        )
        set_ids.append(set_id)

    test_by_set = {
        "ifthen": "ifthen-test",
        "modal": "modal-test",
        "expr": "expr-test",
    }
    lines = []
    for set_id, req_id, output, label in RECORDINGS:
        test_set = test_by_set[set_id.split("-")[0]]
        query = texts[(test_set, req_id)]
        lines.append(
            json.dumps(
                {
                    "support_set_id": set_id,
                    "query": query,
                    "output": output if output is not None else query,
                    "human_class": label,
                },
                ensure_ascii=False,
            )
        )
    (CORPUS / "recordings" / "translations.jsonl").write_text(
        "\n".join(lines) + "\n", encoding="utf-8"
    )

    index = {
        "version": 1,
        "requirement_sets": requirement_files,
        "support_sets": set_ids,
        "recordings": ["recordings/translations.jsonl"],
    }
    (CORPUS / "index.json").write_text(json.dumps(index, indent=2) + "\n", encoding="utf-8")

    experiments_dir = CORPUS.parent / "experiments"
    experiments_dir.mkdir(parents=True, exist_ok=True)
    (experiments_dir / "replay_suite.json").write_text(
        json.dumps(
            [
                {**spec, "backend": {"kind": "replay"}, "grading": "labels"}
                for spec in EXPERIMENTS
            ],
            indent=2,
            ensure_ascii=False,
        )
        + "\n",
        encoding="utf-8",
    )
    print(f"wrote corpus under {CORPUS}")


if __name__ == "__main__":
    main()

"""Behavioural test suites: schema, validation, and the bundled starter suite.

A suite is a JSON document of MFT and INV tests. MFT cases assert an
expected answer; INV cases assert that the answer survives a perturbation,
given either explicitly or as a seeded generator spec.
"""

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

from ..errors import ParseError, SchemaError

TEST_TYPES = ("MFT", "INV")
GENERATOR_KINDS = ("typo", "replace")


@dataclass(frozen=True)
class Case:
    context: str
    question: str
    expected: str | None = None
    perturbed_question: str | None = None
    generator: dict[str, Any] | None = None
    highlight: list[tuple[str, str]] = field(default_factory=list)


@dataclass(frozen=True)
class Test:
    name: str
    type: str
    capability: str
    description: str
    cases: list[Case]


@dataclass(frozen=True)
class BehaviouralTestSuite:
    suite_name: str
    tests: list[Test]


def _parse_case(raw: Any, test_idx: int, case_idx: int, test_type: str) -> Case:
    def fail(reason: str):
        raise SchemaError(reason, test=test_idx, case=case_idx)

    if not isinstance(raw, dict):
        fail("case must be an object")
    context = raw.get("context")
    question = raw.get("question")
    if not isinstance(context, str) or not context.strip():
        fail("case needs a non-empty context")
    if not isinstance(question, str) or not question.strip():
        fail("case needs a non-empty question")

    expected = raw.get("expected")
    perturbed = raw.get("perturbed_question")
    generator = raw.get("generator")

    if test_type == "MFT":
        if not isinstance(expected, str):
            fail("MFT case needs an expected answer")
        if perturbed is not None or generator is not None:
            fail("MFT case must not carry a perturbation")
    else:
        if expected is not None:
            fail("INV case must not carry an expected answer")
        if (perturbed is None) == (generator is None):
            fail("INV case needs exactly one of perturbed_question or generator")
        if perturbed is not None and (not isinstance(perturbed, str) or not perturbed.strip()):
            fail("perturbed_question must be a non-empty string")
        if generator is not None:
            if not isinstance(generator, dict):
                fail("generator must be an object")
            if generator.get("kind") not in GENERATOR_KINDS:
                fail(f"generator kind must be one of {GENERATOR_KINDS}")
            if not isinstance(generator.get("seed"), int):
                fail("generator needs an integer seed")
            if generator["kind"] == "replace":
                lexicon = (generator.get("params") or {}).get("lexicon")
                if not isinstance(lexicon, dict) or not lexicon:
                    fail("replace generator needs params.lexicon")

    highlight_raw = raw.get("highlight") or []
    if not isinstance(highlight_raw, list):
        fail("highlight must be a list of [original, new] pairs")
    highlight = []
    for pair in highlight_raw:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            fail("highlight entries must be [original, new] pairs")
        highlight.append((str(pair[0]), str(pair[1])))

    return Case(
        context=context,
        question=question,
        expected=expected,
        perturbed_question=perturbed,
        generator=generator,
        highlight=highlight,
    )


def parse_suite(data: Any) -> BehaviouralTestSuite:
    if not isinstance(data, dict):
        raise SchemaError("suite must be a JSON object")
    suite_name = data.get("suite_name")
    if not isinstance(suite_name, str) or not suite_name.strip():
        raise SchemaError("suite needs a non-empty suite_name")
    raw_tests = data.get("tests")
    if not isinstance(raw_tests, list) or not raw_tests:
        raise SchemaError("suite needs a non-empty tests list")

    tests = []
    for ti, raw in enumerate(raw_tests):
        if not isinstance(raw, dict):
            raise SchemaError("test must be an object", test=ti)
        test_type = raw.get("type")
        if test_type not in TEST_TYPES:
            raise SchemaError(f"type must be one of {TEST_TYPES}", test=ti)
        name = raw.get("name")
        if not isinstance(name, str) or not name.strip():
            raise SchemaError("test needs a non-empty name", test=ti)
        raw_cases = raw.get("cases")
        if not isinstance(raw_cases, list) or not raw_cases:
            raise SchemaError("test needs a non-empty cases list", test=ti)
        cases = [_parse_case(c, ti, ci, test_type) for ci, c in enumerate(raw_cases)]
        tests.append(
            Test(
                name=name,
                type=test_type,
                capability=str(raw.get("capability", "")),
                description=str(raw.get("description", "")),
                cases=cases,
            )
        )
    return BehaviouralTestSuite(suite_name=suite_name, tests=tests)


def load_suite(source: bytes | str) -> BehaviouralTestSuite:
    """Load and validate a suite from JSON bytes or a JSON string."""
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    return parse_suite(data)


def load_suite_file(path: str) -> BehaviouralTestSuite:
    with open(path, "rb") as fh:
        return load_suite(fh.read())


def bundled_suite() -> BehaviouralTestSuite:
    """The starter suite shipped with the package."""
    data = resources.files("deskqa.behave").joinpath("data/core_suite.json").read_bytes()
    return load_suite(data)

"""Run a behavioural suite against a black-box skill.

The runner only sees a callable that maps (question, context) to a ranked
answer list, so it works identically for internal pipelines, remote skills,
and test doubles. A query error counts as a failure and is flagged in the
failed example rather than aborting the run.
"""

from typing import Any, Callable, Sequence

from ..errors import QAError
from .perturb import apply_perturbation, normalize
from .report import FAILED_EXAMPLE_CAP, TestReport, TestResult
from .suite import BehaviouralTestSuite, Case

# ask(question, context) -> ranked answer texts (best first; may be empty)
AskFn = Callable[[str, str], Sequence[str]]


def _top1(answers: Sequence[str]) -> str:
    return answers[0] if answers else ""


def _run_mft(case: Case, ask: AskFn) -> tuple[bool, dict[str, Any]]:
    example: dict[str, Any] = {
        "context": case.context,
        "question": case.question,
        "expected": case.expected,
    }
    try:
        prediction = _top1(ask(case.question, case.context))
    except QAError as exc:
        example.update(prediction="", error=exc.code)
        return True, example
    except Exception as exc:
        example.update(prediction="", error="internal")
        return True, example
    example["prediction"] = prediction
    return normalize(prediction) != normalize(case.expected), example


def _run_inv(case: Case, ask: AskFn) -> tuple[bool, dict[str, Any]]:
    example: dict[str, Any] = {"context": case.context, "question": case.question}
    try:
        if case.perturbed_question is not None:
            perturbed, highlight = case.perturbed_question, case.highlight
        else:
            perturbed, highlight = apply_perturbation(case.question, case.generator)
        example["perturbed_question"] = perturbed
        if highlight:
            example["highlight"] = [[orig, new] for orig, new in highlight]
        prediction = _top1(ask(case.question, case.context))
        example["prediction"] = prediction
        after = _top1(ask(perturbed, case.context))
        example["prediction_after"] = after
    except QAError as exc:
        example.setdefault("prediction", "")
        example.update(prediction_after="", error=exc.code)
        return True, example
    except Exception:
        example.setdefault("prediction", "")
        example.update(prediction_after="", error="internal")
        return True, example
    return normalize(prediction) != normalize(after), example


def run_suite(suite: BehaviouralTestSuite, skill_id: str, ask: AskFn) -> TestReport:
    """Execute every case in suite order; returns the per-test failure accounting."""
    results = []
    for test in suite.tests:
        failures = 0
        failed_examples: list[dict[str, Any]] = []
        for case in test.cases:
            failed, example = (_run_mft if test.type == "MFT" else _run_inv)(case, ask)
            if failed:
                failures += 1
                if len(failed_examples) < FAILED_EXAMPLE_CAP:
                    failed_examples.append(example)
        results.append(
            TestResult(
                name=test.name,
                type=test.type,
                capability=test.capability,
                total=len(test.cases),
                failures=failures,
                failed_examples=failed_examples,
            )
        )
    return TestReport(skill_id=skill_id, suite_name=suite.suite_name, tests=results)

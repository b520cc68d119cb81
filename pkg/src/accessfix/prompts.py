"""Prompt construction and provider-response parsing.

Three strategies are supported: ``react`` (one worked example with a
labeled Thought), ``few_shot`` (four incorrect/corrected example pairs, no
Thought), and ``chain_of_thought`` (a step-by-step instruction with no
worked example). Template text lives in ``templates/`` as plain files with
{{rule_id}}, {{html}}, {{description}}, and {{help}} placeholders.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .dom import VOID_ELEMENTS, parse_fragment_element
from .errors import (
    IncompleteViolationError,
    InvalidFragmentError,
    UnparseableResponseError,
)
from .rules import Violation

STRATEGIES = ("react", "few_shot", "chain_of_thought")

_SYSTEM_TEMPLATES = {
    "react": "react_system.txt",
    "few_shot": "few_shot_system.txt",
    "chain_of_thought": "chain_of_thought_system.txt",
}


@dataclass
class PromptBundle:
    strategy: str
    system_message: str
    user_message: str
    violation_ref: tuple  # (web_url, rule_id, locator)

    def messages(self) -> list:
        return [
            {"role": "system", "content": self.system_message},
            {"role": "user", "content": self.user_message},
        ]


@dataclass
class FixProposal:
    corrected_html: str
    thought: Optional[str]
    raw_response: str
    provider_id: str = ""


def _load_template(name: str) -> str:
    return (
        resources.files("accessfix").joinpath("templates", name).read_text("utf-8")
    )


def _render(template: str, values: dict) -> str:
    for key, value in values.items():
        template = template.replace("{{" + key + "}}", value)
    return template


def build_prompt(v: Violation, strategy: str) -> PromptBundle:
    """Build the deterministic system/user message pair for one violation."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy: {strategy}")
    if not v.html_snippet.strip():
        raise IncompleteViolationError("violation has an empty HTML snippet")
    if not v.description.strip() or not v.help.strip():
        raise IncompleteViolationError("violation is missing description or help")
    user = _render(_load_template("user_message.txt"), {
        "rule_id": v.rule_id,
        "description": v.description,
        "help": v.help,
        "html": v.html_snippet,
    })
    return PromptBundle(
        strategy=strategy,
        system_message=_load_template(_SYSTEM_TEMPLATES[strategy]),
        user_message=user,
        violation_ref=(v.web_url, v.rule_id, v.locator),
    )


_CORRECTED_RE = re.compile(r"CORRECTED:\s*`+\s*([^`]+?)\s*`+")
_FENCE_RE = re.compile(r"```[a-zA-Z]*\n?(.*?)```", re.S)
_THOUGHT_RE = re.compile(
    r"Thought:\s*(.+?)(?=\n\s*\n|\nCORRECTED:|\n```|$)", re.S
)
_TAG_START_RE = re.compile(r"<([a-zA-Z][a-zA-Z0-9-]*)")


def _is_element(candidate: str) -> bool:
    try:
        parse_fragment_element(candidate)
        return True
    except InvalidFragmentError:
        return False


def _first_balanced_element(text: str) -> Optional[str]:
    for m in _TAG_START_RE.finditer(text):
        tag = m.group(1).lower()
        start = m.start()
        gt = text.find(">", start)
        if gt == -1:
            continue
        if tag in VOID_ELEMENTS or text[gt - 1] == "/":
            candidate = text[start : gt + 1]
            if _is_element(candidate):
                return candidate
            continue
        depth = 0
        for tm in re.finditer(
            rf"</?{re.escape(tag)}(?=[\s/>])[^>]*>|</?{re.escape(tag)}>",
            text[start:],
            re.IGNORECASE,
        ):
            token = tm.group(0)
            if token.startswith("</"):
                depth -= 1
            elif not token.endswith("/>"):
                depth += 1
            if depth == 0:
                candidate = text[start : start + tm.end()]
                if _is_element(candidate):
                    return candidate
                break
    return None


def parse_fix(raw_response: str, provider_id: str = "") -> FixProposal:
    """Extract the corrected tag from a response.

    Priority: a backticked fragment after a CORRECTED: label, then the first
    fenced code block holding one element, then the first balanced top-level
    element anywhere in the text. Never raises on arbitrary text except the
    typed unparseable-response error.
    """
    corrected = None
    m = _CORRECTED_RE.search(raw_response)
    if m and _is_element(m.group(1)):
        corrected = m.group(1)
    if corrected is None:
        for fence in _FENCE_RE.finditer(raw_response):
            body = fence.group(1).strip()
            if _is_element(body):
                corrected = body
                break
    if corrected is None:
        corrected = _first_balanced_element(raw_response)
    if corrected is None:
        raise UnparseableResponseError(
            "no corrected HTML element found in response"
        )
    thought = None
    tm = _THOUGHT_RE.search(raw_response)
    if tm:
        thought = tm.group(1).strip()
    return FixProposal(
        corrected_html=corrected,
        thought=thought,
        raw_response=raw_response,
        provider_id=provider_id,
    )

import random

import pytest

from accessfix import dom, rules
from accessfix.colors import RgbColor, contrast_ratio, parse_color
from accessfix.errors import (
    ConfigError,
    NoRecipeError,
    ProviderUnavailableError,
    ReplayMissError,
)
from accessfix.prompts import build_prompt, parse_fix
from accessfix.providers import (
    HeuristicProvider,
    ProviderConfig,
    RemoteProvider,
    ReplayProvider,
    Transcript,
    heuristic_fix,
    make_provider,
    request_hash,
    rescale_for_contrast,
)
from accessfix.rules import Violation


def violation_for(html, rule_id):
    doc = dom.parse_html(html)
    violations = rules.audit(doc, web_url="fixture")
    return next(v for v in violations if v.rule_id == rule_id)


def reaudit_after_fix(html, rule_id):
    doc = dom.parse_html(html)
    v = next(x for x in rules.audit(doc, web_url="f") if x.rule_id == rule_id)
    from accessfix.corrector import apply_fix

    record = apply_fix(doc, v, heuristic_fix(v))
    assert record.outcome == "applied"
    return rules.audit(doc, web_url="f")


PAGE = '<html lang="en"><body><main id="m">{seed}</main></body></html>'


def test_image_alt_recipe_uses_filename_stem():
    v = violation_for(PAGE.format(seed='<img src="cart-icon.png">'), "image-alt")
    fix = heuristic_fix(v)
    assert fix.corrected_html == '<img src="cart-icon.png" alt="cart icon">'


def test_image_alt_recipe_fallback_for_empty_stem():
    v = violation_for(PAGE.format(seed='<img src="">'), "image-alt")
    assert 'alt="decorative image"' in heuristic_fix(v).corrected_html


def test_html_lang_recipe():
    v = violation_for("<html><body><main>x</main></body></html>", "html-has-lang")
    assert 'lang="en"' in heuristic_fix(v).corrected_html


def test_contrast_recipe_meets_threshold_with_margin():
    v = violation_for(
        PAGE.format(
            seed='<p style="color:#777777; background-color:#ffffff">txt</p>'
        ),
        "color-contrast",
    )
    fix = heuristic_fix(v)
    el = dom.parse_fragment_element(fix.corrected_html)
    style = el.get("style")
    fg = parse_color(style.split(";")[0].split(":")[1])
    assert contrast_ratio(fg, parse_color("#ffffff")) >= 4.55


def test_contrast_recipe_soundness_200_random_cases():
    rng = random.Random(7)
    for _ in range(200):
        fg = RgbColor(rng.randrange(256), rng.randrange(256), rng.randrange(256))
        bg = RgbColor(rng.randrange(256), rng.randrange(256), rng.randrange(256))
        threshold = rng.choice([3.0, 4.5])
        fixed = rescale_for_contrast(fg, bg, threshold)
        assert contrast_ratio(fixed, bg) >= threshold + 0.05


def test_recipes_do_not_reflag_the_fixed_node(rules_dir, rules_manifest):
    # Oracle idempotence over every positive rule fixture.
    for name, seeded in sorted(rules_manifest.items()):
        if not seeded:
            continue
        (rule_id,) = seeded
        after = reaudit_after_fix((rules_dir / name).read_text("utf-8"), rule_id)
        assert all(v.rule_id != rule_id for v in after), name


def test_duplicate_id_recipe_reads_suggestion():
    v = violation_for(
        PAGE.format(seed='<p id="n">a</p><p id="n">b</p>'), "duplicate-id"
    )
    assert 'id="n-2"' in heuristic_fix(v).corrected_html


def test_no_recipe_for_unknown_rule():
    v = Violation("bogus", "minor", "d", "h", "<p></p>", None, "u")
    with pytest.raises(NoRecipeError):
        heuristic_fix(v)


def test_heuristic_provider_delegates():
    v = violation_for(PAGE.format(seed='<img src="a.png">'), "image-alt")
    bundle = build_prompt(v, "react")
    assert HeuristicProvider().propose(bundle, v) == heuristic_fix(v)


def test_heuristic_proposal_round_trips_through_parse_fix():
    v = violation_for(PAGE.format(seed='<img src="a.png">'), "image-alt")
    fix = heuristic_fix(v)
    assert parse_fix(fix.raw_response).corrected_html == fix.corrected_html


def test_transcript_save_load_round_trip(tmp_path):
    t = Transcript()
    t.record("abc", "CORRECTED: `<p>x</p>`")
    path = tmp_path / "t.jsonl"
    t.save(path)
    assert Transcript.load(path).entries == t.entries


def test_replay_provider_hit_and_miss():
    v = violation_for(PAGE.format(seed='<img src="a.png">'), "image-alt")
    bundle = build_prompt(v, "react")
    t = Transcript()
    t.record(request_hash(bundle.messages()),
             'CORRECTED: `<img src="a.png" alt="a">`')
    provider = ReplayProvider(t)
    assert provider.propose(bundle).corrected_html == '<img src="a.png" alt="a">'
    other = build_prompt(v, "few_shot")
    with pytest.raises(ReplayMissError):
        provider.propose(other)


def remote_cfg(**kwargs):
    base = dict(kind="remote", endpoint_url="https://example.test/v1",
                model_name="test-model", max_retries=2)
    base.update(kwargs)
    return ProviderConfig(**base)


def test_remote_provider_posts_chat_completion_shape():
    captured = {}

    def fake_post(url, payload, headers, timeout):
        captured.update(url=url, payload=payload)
        return {"choices": [{"message": {"content": "CORRECTED: `<p>ok</p>`"}}]}

    provider = RemoteProvider(remote_cfg(), post_json=fake_post, sleep=lambda s: None)
    v = violation_for(PAGE.format(seed='<img src="a.png">'), "image-alt")
    bundle = build_prompt(v, "react")
    proposal = provider.propose(bundle)
    assert proposal.corrected_html == "<p>ok</p>"
    assert captured["payload"]["model"] == "test-model"
    roles = [m["role"] for m in captured["payload"]["messages"]]
    assert roles == ["system", "user"]
    assert "temperature" in captured["payload"]
    assert "max_tokens" in captured["payload"]


def test_remote_provider_retries_then_fails():
    calls = []

    def always_down(url, payload, headers, timeout):
        calls.append(url)
        raise OSError("connection refused")

    provider = RemoteProvider(
        remote_cfg(max_retries=2), post_json=always_down, sleep=lambda s: None
    )
    v = violation_for(PAGE.format(seed='<img src="a.png">'), "image-alt")
    with pytest.raises(ProviderUnavailableError):
        provider.propose(build_prompt(v, "react"))
    assert len(calls) == 3  # initial try + max_retries


def test_remote_provider_recovers_after_transient_failure():
    calls = []

    def flaky(url, payload, headers, timeout):
        calls.append(url)
        if len(calls) < 2:
            raise OSError("timeout")
        return {"choices": [{"message": {"content": "CORRECTED: `<p>ok</p>`"}}]}

    provider = RemoteProvider(remote_cfg(), post_json=flaky, sleep=lambda s: None)
    v = violation_for(PAGE.format(seed='<img src="a.png">'), "image-alt")
    assert provider.propose(build_prompt(v, "react")).corrected_html == "<p>ok</p>"


def test_provider_config_validation():
    with pytest.raises(ConfigError):
        ProviderConfig(kind="remote").validate()
    with pytest.raises(ConfigError):
        ProviderConfig(kind="replay").validate()
    with pytest.raises(ConfigError):
        ProviderConfig(kind="mystery").validate()
    with pytest.raises(ConfigError):
        ProviderConfig(kind="heuristic", temperature=-1).validate()


def test_make_provider_kinds(tmp_path):
    assert isinstance(make_provider(ProviderConfig()), HeuristicProvider)
    t = tmp_path / "t.jsonl"
    Transcript().save(t)
    assert isinstance(
        make_provider(ProviderConfig(kind="replay", transcript_path=str(t))),
        ReplayProvider,
    )

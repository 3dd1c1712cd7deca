# Copyright 2026 The relpii Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the frozen test fixtures. Output is deterministic.

    python3 tests/fixtures/make_fixtures.py tests/fixtures
"""

import json
import random
import sys
from pathlib import Path

TYPES = ["occupation", "health", "demographic", "finance", "age", "education",
         "location", "organization", "relationship", "sexual orientation",
         "belief", "name", "code", "datetime", "appearance"]

POOLS = {
    "occupation": ["warehouse supervisor", "preschool teacher", "café owner",
                   "paramedic", "data analyst", "long-haul trucker"],
    "health": ["chronic back pain", "type 1 diabetes", "ADHD", "tinnitus",
               "cognitive development disorder", "a torn ACL"],
    "demographic": ["Nigerian-born", "second-generation Korean", "Québécois",
                    "Romani", "Mexican American", "Syrian refugee"],
    "finance": ["$36,500 annually", "€2,400 a month", "$12,000 in credit card debt",
                "a 720 credit score", "$85/hour", "no savings"],
    "age": ["34", "22 years old", "fifty-one", "67", "19", "late forties"],
    "education": ["Associate's Degree", "a PhD in chemistry", "GED",
                  "two semesters of college", "an MBA", "trade school"],
    "location": ["Springfield", "Zürich", "Brighton, England", "rural Idaho",
                 "São Paulo", "the Bronx"],
    "organization": ["Richardson Ltd", "Kaiser Permanente", "the Red Cross",
                     "Deloitte", "Ikea", "St. Mary’s Hospital"],
    "relationship": ["two children", "my ex-wife", "a twin brother",
                     "my stepdad", "three cats and a husband", "my girlfriend"],
    "sexual orientation": ["heterosexual", "bisexual", "gay", "asexual",
                           "pansexual", "queer"],
    "belief": ["Buddhist", "devout Catholic", "atheist", "Sikh",
               "agnostic", "Quaker"],
    "name": ["Maria Lopez", "José Álvarez", "Priya Raman", "Tom O'Neill",
             "Zoë Kowalski", "Ahmed Hassan"],
    "code": ["AB-12345", "SSN 123-45-6789", "ticket #48213",
             "VIN 1HGCM82633A004352", "badge 7781", "policy KX-99-0042"],
    "datetime": ["March 2021", "last Tuesday", "since 2019",
                 "on 14 February", "three weeks ago", "the summer of 2016"],
    "appearance": ["red hair", "a sleeve tattoo", "6'4\"", "thick glasses",
                   "a shaved head", "vitiligo"],
}

TEMPLATES = {
    "occupation": ["I work as a {v}.", "My job? {v}, for better or worse."],
    "health": ["I have been dealing with {v} lately.", "I live with {v}."],
    "demographic": ["I am {v}.", "Being {v} shapes a lot of my choices."],
    "finance": ["Money-wise I have {v}.", "My budget is {v}."],
    "age": ["I'm {v}, by the way.", "At {v}, I thought I'd have it figured out."],
    "education": ["I finished {v}.", "My education stops at {v}."],
    "location": ["I live in {v}.", "Home is {v} these days."],
    "organization": ["I'm employed by {v}.", "I volunteer with {v}."],
    "relationship": ["I have {v}.", "I share the house with {v}."],
    "sexual orientation": ["I'm {v}.", "For context, I identify as {v}."],
    "belief": ["I'm {v}.", "Faith-wise, I'm {v}."],
    "name": ["My name is {v}.", "Everyone calls me {v}."],
    "code": ["My reference is {v}.", "They gave me {v} to quote."],
    "datetime": ["It started {v}.", "This has been going on {v}."],
    "appearance": ["I have {v}.", "People notice my {v} first."],
}

QUESTIONS = [
    "How can I reduce fatigue after long shifts?",
    "What should I ask my doctor at the next visit?",
    "How do I plan my budget for next year?",
    "Is it worth changing careers at this point?",
    "How can my issues affect my daily responsibilities?",
    "What paperwork do I need to move abroad?",
    "How do I explain a gap in my résumé?",
    "What are effective ways to reduce tiredness?",
]

PREFIXES = ["", "", "So here’s my story: ", "Long post, sorry. ", "Okay… "]


def make_sample(rng, idx):
    high = rng.sample(TYPES, 2)
    low = rng.sample([t for t in TYPES if t not in high], rng.randint(2, 4))
    parts = [(t, 1) for t in high] + [(t, 0) for t in low]
    rng.shuffle(parts)
    context = rng.choice(PREFIXES)
    spans = []
    used_values = []
    for n, (t, rel) in enumerate(parts):
        v = rng.choice(POOLS[t])
        tmpl = rng.choice(TEMPLATES[t])
        if n:
            context += " "
        head, tail = tmpl.split("{v}")
        # Template text may not contain an earlier value, so the first
        # occurrence of each value is the labeled one.
        context += head
        start = len(context)
        context += v
        spans.append({"text": v, "start": start, "end": start + len(v),
                      "type": t, "relevance": rel})
        context += tail
        used_values.append(v)
    if idx % 7 == 3:
        # Repeat a value verbatim without labeling it.
        context += " Yes, " + used_values[0] + " again."
    spans.sort(key=lambda s: s["start"])
    provenance = "reddit" if idx % 5 == 4 else "synthetic"
    status = "validated" if idx % 3 == 0 else "raw"
    return {"id": f"fx-{idx:03d}", "context": context,
            "question": rng.choice(QUESTIONS), "spans": spans,
            "provenance": provenance, "status": status, "revision": 0}


def stats(samples):
    out = {}
    for t in TYPES:
        total = sum(1 for s in samples for sp in s["spans"] if sp["type"] == t)
        high = sum(1 for s in samples for sp in s["spans"]
                   if sp["type"] == t and sp["relevance"] == 1)
        out[t] = {"total": total, "high": high}
    return out


def check(sample):
    spans = sample["spans"]
    for sp in spans:
        assert sample["context"][sp["start"]:sp["end"]] == sp["text"], sp
    for a, b in zip(spans, spans[1:]):
        assert a["end"] <= b["start"]


def dump(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n")


def warehouse_sample():
    context = ("I’m a warehouse supervisor with chronic back pain from lifting "
               "heavy boxes. I live in Springfield and have two children.")
    spans = []
    for text, t, rel in [("warehouse supervisor", "occupation", 1),
                         ("chronic back pain", "health", 1),
                         ("Springfield", "location", 0),
                         ("two children", "relationship", 0)]:
        start = context.index(text)
        spans.append({"text": text, "start": start, "end": start + len(text),
                      "type": t, "relevance": rel})
    return {"id": "warehouse-1", "context": context,
            "question": "How can I reduce fatigue after long shifts?",
            "spans": spans, "provenance": "other", "status": "validated",
            "revision": 0}


def annotated_teacher():
    context = ("So here's my story: I'm 34 and spend my days as a preschool "
               "teacher, which I totally love! I live with a cognitive "
               "development disorder, but honestly, I make it work. My $36,500 "
               "annually keeps me living pretty comfortably, thank you very "
               "much. I snagged my Associate's Degree before diving into the "
               "world of tiny humans and finger paint, and oh yeah, I'm "
               "heterosexual.")
    spans = []
    for text, t, rel in [("34", "age", 0),
                         ("preschool teacher", "occupation", 1),
                         ("cognitive development disorder", "health", 1),
                         ("$36,500 annually", "finance", 0),
                         ("Associate's Degree", "education", 0),
                         ("heterosexual", "sexual orientation", 0)]:
        start = context.index(text)
        spans.append({"text": text, "start": start, "end": start + len(text),
                      "type": t, "relevance": rel})
    return {"id": "review-f1", "context": context,
            "question": "How can my issues affect my daily responsibilities?",
            "spans": spans, "provenance": "synthetic", "status": "raw",
            "revision": 0}


def annotated_second():
    context = ("I want you to know that my journey has taken me from Canada to "
               "Brighton, England, where I've been thriving for the past three "
               "years. Being open about my bisexuality has truly transformed my "
               "life. At 22 years old, I'm navigating life with borderline "
               "personality disorder, and I'm proud to say I've created an "
               "incredible support system at Richardson Ltd.")
    spans = []
    for text, t, rel in [("Canada", "location", 1),
                         ("Brighton, England", "location", 1),
                         ("bisexuality", "sexual orientation", 0),
                         ("22 years old", "age", 1),
                         ("borderline personality disorder", "health", 0),
                         ("Richardson Ltd", "organization", 0)]:
        start = context.index(text)
        spans.append({"text": text, "start": start, "end": start + len(text),
                      "type": t, "relevance": rel})
    return {"id": "review-f2", "context": context,
            "question": "I want to become a citizen, how easy that procedure "
                        "will be for me in terms of legal docs?",
            "spans": spans, "provenance": "reddit", "status": "raw",
            "revision": 0}


def reddit_sample():
    context = "My landlord in Leeds kept my deposit and I work nights as a nurse."
    spans = []
    for text, t, rel in [("Leeds", "location", 1), ("nurse", "occupation", 0)]:
        start = context.index(text)
        spans.append({"text": text, "start": start, "end": start + len(text),
                      "type": t, "relevance": rel})
    return {"id": "review-r1", "context": context,
            "question": "Can I get my deposit back?", "spans": spans,
            "provenance": "reddit", "status": "raw", "revision": 0}


def adversarial(rng):
    """Model outputs wrapped in prose. Each has exactly one intended object."""
    entries_pool = [
        ("Springfield", "location", "0"), ("34", "age", 1),
        ("warehouse supervisor", "occupation", "1"), ("AB-12345", "code", 0),
        ("Maria Lopez", "name", "0"), ("chronic back pain", "health", 1),
        ("{braced} text", "appearance", "0"), ("say \"hi\"", "name", 0),
        ("Zürich", "location", 1), ("two children", "family", "0"),
        ("Nigerian-born", "nationality", 1), ("diabetes", "medical condition", 0),
    ]
    wrappers = [
        "{obj}",
        "Sure! {obj} hope this helps",
        "Here is the JSON you asked for:\n```json\n{obj}\n```",
        "```\n{obj}\n```\nLet me know if anything is missing.",
        "Output: {obj}",
        "I found these PIIs {see below}: {obj}",
        "Note: sets like {a, b} are not used. {obj} End.",
        "{obj}\n\nExplanation: the text mentions {several} details.",
        "Response:\n\n{obj}\n\n}",
        "Thinking... {\"partial\": \n Actually, final answer: {obj}",
        "### Response:\n{obj}",
        "{{ not json }} {obj}",
    ]
    cases = []
    for i in range(50):
        k = 1 + i % 4
        picked = rng.sample(entries_pool, k)
        obj = {text: {"type": t, "relevance": r} for text, t, r in picked}
        indent = 2 if i % 3 == 0 else None
        obj_text = json.dumps(obj, ensure_ascii=(i % 2 == 0), indent=indent)
        raw = wrappers[i % len(wrappers)].replace("{obj}", obj_text)
        alias = {"family": "relationship", "nationality": "demographic",
                 "medical condition": "health"}
        expected = [{"text": text, "type": alias.get(t, t), "relevance": int(r)}
                    for text, t, r in picked]
        cases.append({"case": i, "raw": raw, "expected": expected})
    return cases


def main(out_dir):
    out = Path(out_dir)
    rng = random.Random(20260101)
    samples = [make_sample(rng, i) for i in range(50)]
    for s in samples:
        check(s)
    dump(out / "labeled_fixture.jsonl", samples)
    st = stats(samples)
    with open(out / "labeled_fixture_stats.json", "w", encoding="utf-8") as f:
        json.dump(st, f, indent=2)
        f.write("\n")
    ex = warehouse_sample()
    check(ex)
    dump(out / "warehouse.jsonl", [ex])
    review = [annotated_teacher(), annotated_second(), reddit_sample()]
    for s in review:
        check(s)
    dump(out / "review_fixture.jsonl", review)
    dump(out / "detection_adversarial.jsonl", adversarial(random.Random(7)))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent)

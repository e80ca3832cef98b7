#!/usr/bin/env python3
"""Generate the shipped synthetic fixture corpora.

Two dataset styles:
  - lpp: 6-sentence verdicts whose first sentence quotes the claim and
    whose last sentence states the truth rating;
  - ff: 2-sentence verdicts that never quote the claim up front.

Articles plant the claim-relevant sentences mid-document and put off-topic
decoys at the head and tail, so claim-driven extraction has a real edge
over centrality and truncation.

Template constraints (the manifest oracle depends on them): every sentence
starts with an uppercase letter, ends with a single final period, and
contains no other . ! ? characters, no abbreviations, and no decimals.
"""

from __future__ import annotations

import json
from pathlib import Path

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

TOPICS = [
    dict(actor="Senator Blake", core="the state cut school funding by 40 percent in Ohio last year",
         counter="the education budget fell by about 12 percent",
         cause="an expired federal grant for rural districts",
         amount="40 percent", label="False",
         anchor="school funding in Ohio", partial_anchor="school funding"),
    dict(actor="Governor Reyes", core="unemployment doubled in Texas after the trade deal",
         counter="the jobless rate rose by less than one point",
         cause="seasonal layoffs in the energy sector",
         amount="doubled", label="Mostly False",
         anchor="unemployment in Texas", partial_anchor="unemployment"),
    dict(actor="Mayor Chen", core="violent crime dropped 60 percent in Seattle under her watch",
         counter="violent offenses declined by roughly 9 percent",
         cause="a change in how assaults were recorded",
         amount="60 percent", label="Half True",
         anchor="violent crime in Seattle", partial_anchor="violent crime"),
    dict(actor="Congressman Doyle", core="the highway bill sent 2 billion dollars to foreign contractors",
         counter="foreign firms received under 80 million dollars",
         cause="a subcontract for specialized tunnel equipment",
         amount="2 billion dollars", label="False",
         anchor="the highway bill", partial_anchor="highway spending"),
    dict(actor="Senator Okafor", core="hospital closures tripled across Georgia since the merger",
         counter="three rural hospitals closed over the period",
         cause="staffing shortages that began before the merger",
         amount="tripled", label="Mostly False",
         anchor="hospital closures across Georgia", partial_anchor="hospital closures"),
    dict(actor="Treasurer Novak", core="the pension fund lost 500 million dollars on risky bets",
         counter="the fund posted a small gain for the fiscal year",
         cause="a temporary markdown on bond holdings",
         amount="500 million dollars", label="False",
         anchor="the pension fund", partial_anchor="the pension system"),
    dict(actor="Councilwoman Ortiz", core="the city spent 9 million dollars on an unused parking garage",
         counter="the garage cost 4 million dollars and opened in march",
         cause="a delayed elevator inspection during winter",
         amount="9 million dollars", label="Half True",
         anchor="the parking garage", partial_anchor="city parking"),
    dict(actor="Representative Hale", core="immigration enforcement released 10000 offenders into Kansas",
         counter="federal data lists 214 releases statewide",
         cause="transfers between county facilities being double counted",
         amount="10000 offenders", label="False",
         anchor="immigration enforcement in Kansas", partial_anchor="immigration numbers"),
    dict(actor="Senator Voss", core="electric rates jumped 75 percent because of the wind mandate",
         counter="average rates climbed about 6 percent over five years",
         cause="fuel costs and grid repairs after the storm",
         amount="75 percent", label="Mostly False",
         anchor="electric rates under the wind mandate", partial_anchor="electric bills"),
    dict(actor="Auditor Pham", core="the lottery diverted 300 million dollars away from classrooms",
         counter="lottery transfers to schools grew every single year",
         cause="an accounting change in how prizes were reported",
         amount="300 million dollars", label="False",
         anchor="the lottery and classrooms", partial_anchor="lottery money"),
    dict(actor="Commissioner Ruiz", core="the water district doubled salaries while pipes kept leaking",
         counter="payroll rose 11 percent amid a hiring freeze",
         cause="overtime during the emergency main repairs",
         amount="doubled salaries", label="Mostly False",
         anchor="the water district salaries", partial_anchor="the water system"),
    dict(actor="Delegate Frost", core="the ferry project wasted 50 million dollars on empty boats",
         counter="ridership covered half of the operating costs",
         cause="a slow first season before the schedule changed",
         amount="50 million dollars", label="Half True",
         anchor="the ferry project", partial_anchor="the ferry"),
]

LPP_HEAD_DECOYS = [
    "Welcome to the weekly roundup of statehouse news and local politics.",
    "Reporters gathered at the capitol building before the morning session.",
]
LPP_TAIL_DECOYS = [
    "In other news, the council approved a new parking ordinance downtown.",
    "Subscribe to the newsletter for more coverage of local government.",
]
LPP_FILLERS = [
    "Lawmakers spent the day debating a long list of unrelated measures.",
    "A spokesman promised that a full transcript would be released soon.",
    "Committee members asked for more time to review the documents.",
    "Observers said the debate would likely continue into next month.",
]

FF_HEAD_DECOYS = [
    "This piece continues a weekly series examining viral screenshots.",
    "Readers flagged the image through the tipline over the weekend.",
]
FF_TAIL_DECOYS = [
    "A correction will be appended if new evidence emerges later.",
    "Donate to support independent verification work in your region.",
]
FF_FILLERS = [
    "The post spread quickly across several large social groups.",
    "Screenshots of the post were shared thousands of times.",
    "The agency publishes methodology notes on a separate archive.",
    "Experts said careful reading of the source data matters.",
]


def lpp_triple(i: int, t: dict) -> dict:
    claim = f"{t['actor']} says {t['core']}."
    verdict = " ".join([
        f"{t['actor']} said that {t['core']}.",
        f"Official records show {t['counter']}.",
        f"Most of the change came from {t['cause']}.",
        f"Independent analysts found no support for the {t['amount']} figure.",
        f"The office of {t['actor']} did not answer questions about the number.",
        f"We rate this claim {t['label']}.",
    ])
    article = " ".join([
        LPP_HEAD_DECOYS[0],
        LPP_HEAD_DECOYS[1],
        LPP_FILLERS[0],
        LPP_FILLERS[1],
        f"{t['actor']} told supporters that {t['core']}.",
        f"Official records show {t['counter']}, far less than {t['actor']} suggested.",
        f"Most of the change came from {t['cause']}, according to the budget office.",
        f"Independent analysts found no support for the {t['amount']} figure cited by {t['actor']}.",
        f"The office of {t['actor']} did not answer questions about the number.",
        LPP_FILLERS[2],
        LPP_FILLERS[3],
        LPP_TAIL_DECOYS[0],
        LPP_TAIL_DECOYS[1],
    ])
    return {"id": f"lpp-fix-{i:02d}", "dataset": "lpp", "claim": claim,
            "article": article, "verdict": verdict, "truth_label": t["label"]}


def ff_triple(i: int, t: dict) -> dict:
    claim = t["core"][0].upper() + t["core"][1:] + "."
    v1 = f"Official records on {t['anchor']} show {t['counter']}."
    v2 = f"The change in {t['anchor']} came mostly from {t['cause']}."
    article = " ".join([
        FF_HEAD_DECOYS[0],
        FF_HEAD_DECOYS[1],
        FF_FILLERS[0],
        FF_FILLERS[1],
        f"A widely shared post repeated a misleading figure about {t['partial_anchor']}.",
        v1,
        v2,
        FF_FILLERS[2],
        FF_FILLERS[3],
        FF_TAIL_DECOYS[0],
        FF_TAIL_DECOYS[1],
    ])
    return {"id": f"ff-fix-{i:02d}", "dataset": "ff", "claim": claim,
            "article": article, "verdict": f"{v1} {v2}", "truth_label": t["label"]}


def write_jsonl(path: Path, records: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    print(f"wrote {path} ({len(records)} triples)")


def main() -> None:
    write_jsonl(FIXTURE_DIR / "lpp_fixture.jsonl",
                [lpp_triple(i, t) for i, t in enumerate(TOPICS)])
    write_jsonl(FIXTURE_DIR / "ff_fixture.jsonl",
                [ff_triple(i, t) for i, t in enumerate(TOPICS)])


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Writes the 200-class call-center fixture used by tests and benchmarks.

Every class gets three keywords that no other class uses, so a clean
utterance naming one keyword has an unambiguous keyword-overlap winner.
Output is a pure function of the arguments.
"""
import argparse
import json
import random
from pathlib import Path

SYLLABLES = ["ка", "ра", "та", "ло", "ми", "су", "не", "бе", "жа", "қо", "ғы", "өр",
             "ту", "ше", "ды", "зи", "ап", "ом", "ұл", "ік"]
FILLERS = {
    "kk": ["маған", "көмектесіңізші", "сұрағым", "бар", "туралы", "білгім", "келеді", "өтінемін"],
    "ru": ["мне", "нужно", "помогите", "вопрос", "про", "хочу", "узнать", "пожалуйста"],
}
YES = {"kk": "иә", "ru": "да"}
NO = {"kk": "жоқ", "ru": "нет"}


def dump(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


def make_words(rng: random.Random, count: int, taken: set) -> list:
    words = []
    while len(words) < count:
        w = "".join(rng.choice(SYLLABLES) for _ in range(rng.randint(3, 4)))
        if w not in taken:
            taken.add(w)
            words.append(w)
    return words


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="tests/fixtures/callcenter200")
    ap.add_argument("--classes", type=int, default=200)
    ap.add_argument("--seed", type=int, default=20240517)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    out = Path(args.out)
    (out / "scenarios").mkdir(parents=True, exist_ok=True)

    taken = set(w for ws in FILLERS.values() for w in ws) | set(YES.values()) | set(NO.values())
    classes = []
    for i in range(args.classes):
        cid = f"c{i:03d}"
        kws = make_words(rng, 3, taken)
        classes.append({
            "class_id": cid,
            "display_name": {"kk": f"{kws[0]} сұрағы", "ru": f"вопрос {kws[0]}"},
            "queue_id": f"Q{i % 40:02d}",
            "keywords": kws,
        })
    dump(out / "taxonomy.json", classes)
    dump(out / "routing.json", {"operator_queue": "QOP",
                                "queues": sorted({c["queue_id"] for c in classes})})

    with open(out / "knowledge.jsonl", "w", encoding="utf-8") as f:
        for c in classes:
            lang = rng.choice(["kk", "ru"])
            text = " ".join(rng.sample(FILLERS[lang], 3) + c["keywords"][:2])
            f.write(json.dumps({"doc_id": f"kb-{c['class_id']}", "text": text,
                                "class_hint": c["class_id"]}, ensure_ascii=False) + "\n")

    dump(out / "prompts.json", {
        "kk": {"greeting": "Сәлеметсіз бе!", "confirm": "Сіздің сұрағыңыз: {class_name}. Дұрыс па?",
               "reask": "Қайталап айтыңызшы."},
        "ru": {"greeting": "Здравствуйте!", "confirm": "Ваш вопрос: {class_name}. Верно?",
               "reask": "Повторите, пожалуйста."},
    })
    dump(out / "lexicon.json", {"kk": {"yes": ["иә", "ия"], "no": ["жоқ"]},
                                "ru": {"yes": ["да", "верно"], "no": ["нет", "неверно"]}})
    (out / "classify_prompt.txt").write_text(
        "Classes:\n{classes}\n\nContext:\n{context}\n\nCaller: {utterance}\n", encoding="utf-8")
    dump(out / "engine.json", {
        "confidence_threshold": 0.7, "max_confirm_attempts": 2, "rag_k": 3, "seed": 11,
        "default_language": "kk", "taxonomy": "taxonomy.json", "routing": "routing.json",
        "knowledge_base": "knowledge.jsonl", "classify_prompt": "classify_prompt.txt",
        "prompts": "prompts.json", "lexicon": "lexicon.json",
        "backends": {"asr": {"kind": "mock", "error_rate": 0.0, "seed": 11},
                     "classifier": {"kind": "mock"}, "tts": {"kind": "mock"}},
    })

    def utterance(c, lang):
        words = rng.sample(FILLERS[lang], 4) + c["keywords"]
        rng.shuffle(words)
        return " ".join(words)

    happy = []
    for c in classes:
        lang = rng.choice(["kk", "ru"])
        happy.append({"scenario_id": f"happy-{c['class_id']}", "language": lang,
                      "steps": [{"utterance": utterance(c, lang)}, {"reply": YES[lang]},
                                {"reply": YES[lang]}],
                      "expected_class": c["class_id"], "expected_terminal": "Routed"})
    with open(out / "scenarios" / "happy.jsonl", "w", encoding="utf-8") as f:
        for s in happy:
            f.write(json.dumps(s, ensure_ascii=False) + "\n")

    scripted = []
    for k in range(10):
        c = classes[rng.randrange(len(classes))]
        lang = ["kk", "ru"][k % 2]
        steps = []
        for _ in range(2):
            steps += [{"utterance": utterance(c, lang)}, {"reply": NO[lang]}]
        scripted.append({"scenario_id": f"escalate-{k:02d}", "language": lang, "steps": steps,
                         "expected_class": None, "expected_terminal": "Escalated"})
    for k in range(10):
        c = classes[rng.randrange(len(classes))]
        lang = ["kk", "ru"][k % 2]
        scripted.append({"scenario_id": f"hangup-{k:02d}", "language": lang,
                         "steps": [{"utterance": utterance(c, lang)}, {"hangup": True}],
                         "expected_class": None, "expected_terminal": "Abandoned"})
    with open(out / "scenarios" / "scripted.jsonl", "w", encoding="utf-8") as f:
        for s in scripted:
            f.write(json.dumps(s, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()

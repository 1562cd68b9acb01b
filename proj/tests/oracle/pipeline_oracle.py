#!/usr/bin/env python3
"""Independent reference trace of the linking pipeline.

Written from the pipeline definition alone (no shared code with the C++
library) and used to freeze tests/fixtures/golden_predictions.jsonl and
tests/fixtures/stats_expected.json. Re-run only when the bundled fixtures
change:

    python3 tests/oracle/pipeline_oracle.py
"""

import json
import math
import os
import sys
import unicodedata

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "..")

LAMBDA = 0.5
TAU = 0.05


def normalize(s):
    s = unicodedata.normalize("NFC", s)
    out = []
    for ch in s:
        cp = ord(ch)
        if cp == 0x0643:
            ch = "ک"
        elif cp == 0x064A:
            ch = "ی"
        elif cp == 0x0640 or 0x064B <= cp <= 0x0652 or cp == 0x200C:
            continue
        out.append(ch)
    s = " ".join("".join(out).split())
    return unicodedata.normalize("NFC", s.casefold())


def is_sep(ch):
    return ch.isspace() or unicodedata.category(ch).startswith("P")


def tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        if is_sep(text[i]):
            i += 1
            continue
        j = i
        while j < n and not is_sep(text[j]):
            j += 1
        t = normalize(text[i:j])
        if t:
            toks.append((t, i, j))
        i = j
    return toks


def count_sentences(text):
    segs, cur = [], []
    for ch in text:
        if ch in ".!?؟\n":
            segs.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    segs.append("".join(cur))
    return sum(1 for s in segs if tokenize(s))


def load():
    with open(os.path.join(ROOT, "data", "lists.json"), encoding="utf-8") as f:
        lists = json.load(f)
    stop = {normalize(w) for w in lists["stopwords"]}
    ents = {}
    with open(os.path.join(ROOT, "data", "mini_kb.jsonl"), encoding="utf-8") as f:
        for line in f:
            if line.strip():
                e = json.loads(line)
                ents[e["id"]] = e
    for e in ents.values():
        e["links"] = {l for l in e["links"] if l in ents and l != e["id"]}
    alias = {}
    for e in ents.values():
        for s in [e["label"]] + e["variants"]:
            alias.setdefault(normalize(s), set()).add(e["id"])
    terms = {}
    df = {}
    n_docs = 0
    for e in ents.values():
        ts = [t for t, _, _ in tokenize(e["article"]) if t not in stop]
        tf = {}
        for t in ts:
            tf[t] = tf.get(t, 0) + 1
        terms[e["id"]] = tf
        if e["article"]:
            n_docs += 1
        for t in tf:
            df[t] = df.get(t, 0) + 1
    rare = set(lists["rare_blocklist"]) | {i for i, e in ents.items() if e.get("rare")}
    return ents, alias, terms, df, n_docs, stop, rare, lists


def main():
    ents, alias, terms, df, n_docs, stop, rare, lists = load()
    type_map = {k: set(v) for k, v in lists["type_mapping"].items()}
    class_filters = {k: ({normalize(t) for t in v["triggers"]}, v["penalty"])
                     for k, v in lists["class_filters"].items()}

    def idf(t):
        return math.log((1 + n_docs) / (1 + df.get(t, 0))) + 1

    def linked(a, b):
        return b in ents[a]["links"] or a in ents[b]["links"]

    docs = []
    with open(os.path.join(ROOT, "data", "mini_corpus.jsonl"), encoding="utf-8") as f:
        for line in f:
            if line.strip():
                docs.append(json.loads(line))

    out_lines = []
    for d in docs:
        toks = tokenize(d["text"])
        doc_terms = {t for t, _, _ in toks if t not in stop}
        kept_sets, penalties = [], []
        for m in d["mentions"]:
            cands = set(alias.get(normalize(m["surface"]), set()))
            kept, pen = set(), {}
            for c in cands:
                e = ents[c]
                nt = m.get("ner_type")
                if nt and nt != "UNKNOWN" and nt in type_map and e["class"] not in type_map[nt]:
                    continue
                pt = m.get("pos")
                if pt and pt != "UNKNOWN" and e["pos"] != "UNKNOWN" and e["pos"] != pt:
                    continue
                if c in rare:
                    continue
                p = 1.0
                if e["class"] in class_filters:
                    trig, penalty = class_filters[e["class"]]
                    if not (trig & doc_terms):
                        p = penalty
                kept.add(c)
                pen[c] = p
            kept_sets.append(kept)
            penalties.append(pen)

        pmentions = []
        for mi, m in enumerate(d["mentions"]):
            ctx = {}
            for t, s, e in toks:
                if e <= m["start"] or s >= m["end"]:
                    if t not in stop:
                        ctx[t] = ctx.get(t, 0) + 1
            raw = {}
            for c in kept_sets[mi]:
                others = set()
                for mj, ks in enumerate(kept_sets):
                    if mj != mi:
                        others |= ks
                raw[c] = sum(1 for o in others if o != c and linked(c, o))
            mx = max(raw.values()) if raw else 0
            scored = []
            for c in kept_sets[mi]:
                art = terms[c]
                if not ctx or not art:
                    cs = 0.0
                else:
                    vocab = sorted(set(ctx) | set(art))
                    a = [ctx.get(t, 0) * idf(t) for t in vocab]
                    b = [art.get(t, 0) * idf(t) for t in vocab]
                    dot = sum(x * y for x, y in zip(a, b))
                    na = math.sqrt(sum(x * x for x in a))
                    nb = math.sqrt(sum(y * y for y in b))
                    cs = dot / (na * nb) if na > 0 and nb > 0 else 0.0
                gs = raw[c] / mx if mx > 0 else 0.0
                comb = penalties[mi][c] * (LAMBDA * cs + (1 - LAMBDA) * gs)
                scored.append((c, cs, gs, penalties[mi][c], comb))
            scored.sort(key=lambda x: (-x[4], x[0]))
            if not scored:
                pred, score, amb = "NIL", 0.0, []
            elif scored[0][4] < TAU:
                pred, score, amb = "NIL", scored[0][4], scored
            else:
                pred, score, amb = scored[0][0], scored[0][4], scored[1:]
            pm = {"start": m["start"], "end": m["end"], "surface": m["surface"],
                  "prediction": pred, "score": score,
                  "ambiguity": [{"id": x[0], "score": x[4], "context": x[1], "graph": x[2],
                                 "penalty": x[3]} for x in amb]}
            pmentions.append(pm)
        out_lines.append({"id": d["id"], "mentions": pmentions})

    fx = os.path.join(ROOT, "tests", "fixtures")
    os.makedirs(fx, exist_ok=True)
    with open(os.path.join(fx, "golden_predictions.jsonl"), "w", encoding="utf-8") as f:
        for rec in out_lines:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")

    def stats(ds):
        s = {"documents": len(ds), "sentences": 0, "words": 0, "entities": 0, "candidates": 0}
        for d in ds:
            s["sentences"] += count_sentences(d["text"])
            s["words"] += len(tokenize(d["text"]))
            s["entities"] += len(d["mentions"])
            for m in d["mentions"]:
                s["candidates"] += len(alias.get(normalize(m["surface"]), set()))
        return s

    cats = sorted({d["category"] for d in docs})
    expected = {"total": stats(docs),
                "per_category": {c: stats([d for d in docs if d["category"] == c]) for c in cats},
                "alias_keys": len(alias),
                "undirected_links": len({frozenset((a, b)) for a in ents for b in ents[a]["links"]}),
                "dropped_links": 1}
    with open(os.path.join(fx, "stats_expected.json"), "w", encoding="utf-8") as f:
        json.dump(expected, f, ensure_ascii=False, indent=2)
        f.write("\n")

    for rec in out_lines:
        for m in rec["mentions"]:
            print(rec["id"], m["surface"], m["prediction"], round(m["score"], 4),
                  [(a["id"], round(a["score"], 4)) for a in m["ambiguity"]], file=sys.stderr)
    print(json.dumps(expected["total"]), expected["alias_keys"], expected["undirected_links"],
          file=sys.stderr)


if __name__ == "__main__":
    main()

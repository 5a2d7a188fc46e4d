"""Command-line front door.

Reports are deterministic for identical inputs and seed: JSON goes to
stdout with sorted keys, timing goes to stderr.  Exit codes: 0 success,
1 verification or decomposition failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from typing import Any, Optional

from . import presets
from .decompose import (
    CommutatorData,
    CommutatorSite,
    RelationWitness,
    commutator_target,
    decompose_commutator_abelian_top,
    decompose_commutator_pair,
    decompose_derived_wreath,
    decompose_full_finite_top,
    decompose_shifted_commutators,
    find_reversal_asymmetric_relation,
)
from .commutators import commutator_word
from .errors import (
    AlphabetMismatch,
    GroupDefinitionError,
    PalinwidthError,
    WordSyntaxError,
)
from .groups import (
    AbelianProductGroup,
    AbelianizedFreeGroup,
    BaumslagSolitar,
    FiniteGroup,
    FreeAbelianGroup,
    FreeGroup,
    Group,
)
from .oracle import exact_palindromic_width, oracle_for, verify_factorization
from .words import Word, relabel, reverse
from .wreath import WreathProduct

_INPUT_ERRORS = (GroupDefinitionError, WordSyntaxError, AlphabetMismatch, ValueError)


# ---------------------------------------------------------------------------
# group loading


def group_from_def(definition: dict) -> Group:
    if "preset" in definition:
        return presets.get(definition["preset"])
    if "extra_generator" in definition:
        inner = group_from_def(definition["base"])
        if not isinstance(inner, FiniteGroup):
            raise GroupDefinitionError("extra generators only extend finite groups")
        extra = definition["extra_generator"]
        value = inner.evaluate(Word.parse(inner.alphabet, extra["value_word"]))
        return inner.with_extra_generator(extra["name"], value)
    kind = definition.get("kind")
    if kind == "finite":
        if "generators" in definition and "table" not in definition:
            return FiniteGroup.from_permutations(
                list(definition["generators"].items()), source_def=definition
            )
        if "table" in definition:
            gens = definition["generators"]
            return FiniteGroup.from_table(
                list(gens.keys()), definition["table"], list(gens.values()),
                source_def=definition,
            )
        raise GroupDefinitionError("finite group needs generators or a table")
    if kind == "free":
        return FreeGroup(definition.get("rank"), definition.get("names"), source_def=definition)
    if kind == "free_abelian":
        return FreeAbelianGroup(
            definition.get("rank"), definition.get("names"), source_def=definition
        )
    if kind == "abelianized_free":
        return AbelianizedFreeGroup(
            definition.get("rank"), definition.get("names"), source_def=definition
        )
    if kind == "abelian_product":
        finite = group_from_def(definition["finite"])
        if not isinstance(finite, FiniteGroup):
            raise GroupDefinitionError("abelian product needs a finite part")
        return AbelianProductGroup(
            definition["free_rank"], finite, definition.get("free_names"),
            source_def=definition,
        )
    raise GroupDefinitionError(f"unknown group kind {kind!r}")


def load_group(source: str) -> Group:
    if os.path.exists(source):
        with open(source) as handle:
            return group_from_def(json.load(handle))
    if source.lstrip().startswith("{"):
        return group_from_def(json.loads(source))
    return presets.get(source)


def group_def(group: Group) -> dict:
    definition = getattr(group, "source_def", None)
    if definition is not None:
        return definition
    if isinstance(group, FreeGroup):
        return {"kind": "free", "names": list(group.alphabet.names)}
    if isinstance(group, AbelianizedFreeGroup):
        return {"kind": "abelianized_free", "names": list(group.alphabet.names)}
    if isinstance(group, FreeAbelianGroup):
        return {"kind": "free_abelian", "names": list(group.alphabet.names)}
    raise GroupDefinitionError(f"cannot serialise group {group!r}")


def _witness_def(witness: RelationWitness, original: FiniteGroup) -> dict:
    out: dict[str, Any] = {"relation": str(witness.relation)}
    if witness.extra_generator is not None:
        name, value = witness.extra_generator
        out["extra_generator"] = {
            "name": name,
            "value_word": str(original.element_word(value)),
        }
    else:
        out["extra_generator"] = None
    return out


def _witness_from_def(definition: Optional[dict], top: FiniteGroup) -> Optional[RelationWitness]:
    if definition is None:
        return None
    group = top
    extra = None
    if definition.get("extra_generator"):
        info = definition["extra_generator"]
        value = top.evaluate(Word.parse(top.alphabet, info["value_word"]))
        group = top.with_extra_generator(info["name"], value)
        extra = (info["name"], value)
    relation = Word.parse(group.alphabet, definition["relation"])
    return RelationWitness(
        group=group,
        relation=relation,
        reverse_value=group.evaluate(reverse(relation)),
        extra_generator=extra,
    )


# ---------------------------------------------------------------------------
# shared input parsing


def _parse_exponents(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise GroupDefinitionError(f"bad exponent list {text!r}") from None


def _parse_commutators(text: str, wreath: WreathProduct) -> CommutatorData:
    if text.startswith("@"):
        with open(text[1:]) as handle:
            raw = json.load(handle)
    else:
        raw = json.loads(text)
    sites = []
    for entry in raw:
        position = wreath.top.evaluate(Word.parse(wreath.top.alphabet, entry["position"]))
        pairs = tuple(
            (
                Word.parse(wreath.base.alphabet, first),
                Word.parse(wreath.base.alphabet, second),
            )
            for first, second in entry["pairs"]
        )
        sites.append(CommutatorSite(position, pairs))
    return CommutatorData(tuple(sites))


def _factorization_report(fact, extra: Optional[dict] = None) -> dict:
    report = {
        "factors": [str(w) for w in fact.factors],
        "count": fact.count,
        "bound": fact.bound_claimed,
        "bound_formula": fact.bound_formula,
        "verified": fact.verified,
        "certificate": fact.certificate.to_dict(),
    }
    if extra:
        report.update(extra)
    return report


# ---------------------------------------------------------------------------
# subcommands


def cmd_pw_exact(args) -> tuple[dict, bool]:
    group = load_group(args.group)
    if not isinstance(group, FiniteGroup):
        raise GroupDefinitionError("pw-exact needs a finite group")
    definition = group_def(group)
    if args.extend_gens:
        name, _, word_text = args.extend_gens.partition("=")
        if not word_text:
            raise GroupDefinitionError("--extend-gens wants name=word")
        value = group.evaluate(Word.parse(group.alphabet, word_text))
        group = group.with_extra_generator(name.strip(), value)
        definition = {
            "base": definition,
            "extra_generator": {"name": name.strip(), "value_word": word_text.strip()},
        }
    report = exact_palindromic_width(group)
    witness_factors = oracle_for(group).decompose(report.witness)
    return (
        {
            "command": "pw-exact",
            "group": definition,
            "width": report.width,
            "witness": {
                "index": report.witness,
                "word": str(group.element_word(report.witness)),
                "factors": [str(w) for w in witness_factors],
            },
            "histogram": {str(k): v for k, v in sorted(report.histogram().items())},
        },
        True,
    )


def cmd_find_relation(args) -> tuple[dict, bool]:
    group = load_group(args.group)
    witness = find_reversal_asymmetric_relation(group, args.budget)
    if isinstance(group, BaumslagSolitar):
        reverse_display = str(witness.reverse_value)
        extra = None
    else:
        reverse_display = str(witness.group.element_word(witness.reverse_value))
        extra = witness.extra_generator
    return (
        {
            "command": "find-relation",
            "group": group_def(group),
            "budget": args.budget,
            "relation": str(witness.relation),
            "reverse_value": reverse_display,
            "extra_generator": (
                None
                if extra is None
                else {"name": extra[0], "value_word": str(group.element_word(extra[1]))}
            ),
        },
        True,
    )


def _decompose_abelian_top(args, wreath: WreathProduct) -> tuple[dict, Any]:
    if args.exps is None:
        raise GroupDefinitionError("--exps is required for abelian-top mode")
    exponents = _parse_exponents(args.exps)
    a_word = Word.parse(wreath.alphabet, args.word or "1")
    inputs = {"word": str(a_word), "exps": exponents}
    if args.word_b is not None:
        b_word = Word.parse(wreath.alphabet, args.word_b)
        inputs["word_b"] = str(b_word)
        fact = decompose_commutator_pair(wreath, a_word, b_word, exponents)
    else:
        fact = decompose_commutator_abelian_top(wreath, a_word, exponents)
    return inputs, fact


def cmd_decompose(args) -> tuple[dict, bool]:
    top = load_group(args.top)
    base = load_group(args.base)
    wreath = WreathProduct(top, base)
    report: dict[str, Any] = {
        "command": "decompose",
        "mode": args.mode,
        "top": group_def(top),
        "base": group_def(base),
        "seed": args.seed,
    }

    if args.mode == "abelian-top":
        inputs, fact = _decompose_abelian_top(args, wreath)
        report["inputs"] = inputs
    elif args.mode == "shifted":
        data = _parse_commutators(args.commutators or "[]", wreath)
        a_top = top.evaluate(Word.parse(top.alphabet, args.a_top or "1"))
        fact = decompose_shifted_commutators(wreath, data, a_top)
        report["inputs"] = {
            "commutators": args.commutators or "[]",
            "a_top": args.a_top or "1",
        }
        report["shift_used"] = list(fact.meta["shift"])
        report["retries"] = fact.meta["retries"]
    elif args.mode == "derived":
        if not isinstance(top, FiniteGroup):
            raise GroupDefinitionError("derived mode needs a finite top")
        witness = _relation_witness(args, top)
        wide = WreathProduct(witness.group, base)
        data = _parse_commutators(args.commutators or "[]", wide)
        a_top = top.evaluate(Word.parse(top.alphabet, args.a_top or "1"))
        fact = decompose_derived_wreath(wide, data, a_top, witness)
        report["inputs"] = {
            "commutators": args.commutators or "[]",
            "a_top": args.a_top or "1",
        }
        report["relation_used"] = _witness_def(witness, top)
    elif args.mode == "finite-top":
        word = Word.parse(wreath.alphabet, args.word or "1")
        witness = _relation_witness(args, top) if args.relation != "auto" else None
        fact = decompose_full_finite_top(wreath, word, witness=witness)
        report["inputs"] = {"word": str(word)}
        report["relation_used"] = _witness_def(fact.meta["witness"], top)
    else:
        raise GroupDefinitionError(f"unknown mode {args.mode!r}")

    report.update(_factorization_report(fact))
    return report, fact.verified


def _relation_witness(args, top: FiniteGroup) -> RelationWitness:
    if args.relation and args.relation != "auto":
        relation = Word.parse(top.alphabet, args.relation)
        witness = RelationWitness(
            group=top,
            relation=relation,
            reverse_value=top.evaluate(reverse(relation)),
        )
        return witness
    return find_reversal_asymmetric_relation(top, args.budget)


def cmd_verify(args) -> tuple[dict, bool]:
    with open(args.report) as handle:
        stored = json.load(handle)
    if stored.get("command") != "decompose":
        raise GroupDefinitionError("verify wants a decompose report")
    top = group_from_def(stored["top"])
    base = group_from_def(stored["base"])
    mode = stored["mode"]
    witness = None
    if stored.get("relation_used") is not None:
        witness = _witness_from_def(stored["relation_used"], top)
    wreath = WreathProduct(witness.group if witness else top, base)
    inputs = stored["inputs"]

    if mode == "abelian-top":
        exponents = inputs["exps"]
        t_word = Word.from_blocks(wreath.alphabet, list(enumerate(exponents)))
        a_word = Word.parse(wreath.alphabet, inputs["word"])
        target = wreath.evaluate(commutator_word(a_word, t_word))
        if "word_b" in inputs:
            b_word = Word.parse(wreath.alphabet, inputs["word_b"])
            t2_word = Word.from_blocks(
                wreath.alphabet, [(i, 2 * e) for i, e in enumerate(exponents)]
            )
            target = wreath.multiply(target, wreath.evaluate(commutator_word(b_word, t2_word)))
    elif mode in ("shifted", "derived"):
        data = _parse_commutators(inputs["commutators"], wreath)
        a_top = wreath.top.evaluate(
            relabel(Word.parse(top.alphabet, inputs["a_top"]), wreath.top.alphabet)
        )
        target = commutator_target(wreath, data, a_top)
    elif mode == "finite-top":
        target = wreath.evaluate(Word.parse(wreath.alphabet, inputs["word"]))
    else:
        raise GroupDefinitionError(f"unknown mode {mode!r}")

    factors = [Word.parse(wreath.alphabet, text) for text in stored["factors"]]
    certificate = verify_factorization(wreath, target, factors)
    return (
        {
            "command": "verify",
            "report": args.report,
            "mode": mode,
            "count": len(factors),
            "verified": certificate.valid,
            "certificate": certificate.to_dict(),
        },
        certificate.valid,
    )


def _bench_rows(suite: str, samples: int, rng: random.Random) -> list[dict]:
    rows = []
    if suite == "abelian-top":
        wreath = WreathProduct(FreeAbelianGroup(2), FreeGroup(names=["y1", "y2"]))
        base_letters = [2, 3]
        for i in range(samples):
            letters = [
                (rng.choice(base_letters), rng.choice((1, -1)))
                for _ in range(rng.randint(0, 8))
            ]
            word = Word(wreath.alphabet, letters)
            exponents = [rng.randint(-5, 5) for _ in range(2)]
            fact = decompose_commutator_abelian_top(wreath, word, exponents)
            rows.append(_bench_row(suite, i, fact))
    elif suite == "shifted":
        top = FreeAbelianGroup(1, names=["x"])
        s3 = presets.symmetric_3()
        wreath = WreathProduct(top, s3)
        for i in range(samples):
            f_word = _random_word(rng, s3.alphabet, 4)
            g_word = _random_word(rng, s3.alphabet, 4)
            data = CommutatorData(
                (CommutatorSite((rng.randint(-3, 3),), ((f_word, g_word),)),)
            )
            fact = decompose_shifted_commutators(wreath, data, (rng.randint(-2, 2),))
            rows.append(_bench_row(suite, i, fact))
    elif suite == "derived":
        s3 = presets.symmetric_3()
        witness = find_reversal_asymmetric_relation(s3)
        wreath = WreathProduct(witness.group, FreeGroup(names=["y1", "y2"]))
        for i in range(samples):
            data = _random_commutator_data(rng, wreath, s3.size)
            a_top = rng.randrange(s3.size)
            fact = decompose_derived_wreath(wreath, data, a_top, witness)
            rows.append(_bench_row(suite, i, fact))
    elif suite == "finite-top":
        wreath = WreathProduct(presets.symmetric_3(), FreeGroup(names=["y1", "y2"]))
        for i in range(samples):
            letters = [
                (rng.randrange(4), rng.choice((1, -1)))
                for _ in range(rng.randint(0, 30))
            ]
            fact = decompose_full_finite_top(wreath, Word(wreath.alphabet, letters))
            rows.append(_bench_row(suite, i, fact))
    else:
        raise GroupDefinitionError(f"unknown suite {suite!r}")
    return rows


def _random_word(rng: random.Random, alphabet, max_len: int) -> Word:
    return Word(
        alphabet,
        [
            (rng.randrange(len(alphabet)), rng.choice((1, -1)))
            for _ in range(rng.randint(1, max_len))
        ],
    )


def _random_commutator_data(rng: random.Random, wreath: WreathProduct, top_size: int) -> CommutatorData:
    positions = rng.sample(range(top_size), rng.randint(0, 3))
    sites = tuple(
        CommutatorSite(
            position,
            tuple(
                (
                    _random_word(rng, wreath.base.alphabet, 4),
                    _random_word(rng, wreath.base.alphabet, 4),
                )
                for _ in range(rng.randint(1, 2))
            ),
        )
        for position in positions
    )
    return CommutatorData(sites)


def _bench_row(suite: str, index: int, fact) -> dict:
    return {
        "suite": suite,
        "sample": index,
        "count": fact.count,
        "bound": fact.bound_claimed,
        "margin": fact.bound_claimed - fact.count,
        "verified": fact.verified,
    }


def cmd_bench(args) -> tuple[dict, bool]:
    suites = (
        ["abelian-top", "shifted", "derived", "finite-top"]
        if args.suite == "all"
        else [args.suite]
    )
    rows = []
    for suite in suites:
        rows.extend(_bench_rows(suite, args.samples, random.Random(args.seed)))
    return (
        {
            "command": "bench",
            "seed": args.seed,
            "samples": args.samples,
            "rows": rows,
        },
        all(row["verified"] for row in rows),
    )


# ---------------------------------------------------------------------------
# output and wiring


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    if report["command"] == "bench":
        print(f"{'suite':<12} {'sample':>6} {'count':>5} {'bound':>5} {'margin':>6} verified")
        for row in report["rows"]:
            print(
                f"{row['suite']:<12} {row['sample']:>6} {row['count']:>5}"
                f" {row['bound']:>5} {row['margin']:>6} {row['verified']}"
            )
        return
    for key in sorted(report):
        value = report[key]
        if key == "factors":
            print("factors:")
            for factor in value:
                print(f"  {factor}")
        else:
            print(f"{key}: {json.dumps(value, sort_keys=True)}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="palinwidth",
        description="Palindrome factorizations in wreath products, with exact checking",
    )
    parser.add_argument("--format", choices=["json", "text"], default="json")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("decompose", help="emit a certified palindrome factorization")
    p.add_argument("--top", required=True, help="group file, inline JSON, or preset")
    p.add_argument("--base", required=True)
    p.add_argument("--mode", choices=["derived", "finite-top", "abelian-top", "shifted"],
                   default="finite-top")
    p.add_argument("--word", help="input word over the combined alphabet")
    p.add_argument("--word-b", dest="word_b", help="second word for the two-commutator shape")
    p.add_argument("--exps", help="comma-separated exponents for the abelian top")
    p.add_argument("--commutators", help="JSON (or @file) commutator data")
    p.add_argument("--a-top", dest="a_top", help="top element as a word")
    p.add_argument("--relation", default="auto", help="'auto' or an explicit relation word")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("pw-exact", help="exact palindromic width of a finite group")
    p.add_argument("--group", required=True)
    p.add_argument("--extend-gens", dest="extend_gens", help="name=word extra generator")
    p.set_defaults(func=cmd_pw_exact)

    p = sub.add_parser("find-relation", help="reversal-asymmetric relation search")
    p.add_argument("--group", required=True)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_find_relation)

    p = sub.add_parser("verify", help="re-check a stored decompose report")
    p.add_argument("--report", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="factor counts against claimed bounds")
    p.add_argument("--suite", default="all",
                   choices=["all", "abelian-top", "shifted", "derived", "finite-top"])
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    started = time.perf_counter()
    try:
        report, ok = args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PalinwidthError as exc:
        failure = {"command": args.subcommand, "failure": f"{type(exc).__name__}: {exc}"}
        _emit(failure, args.format)
        print(f"elapsed_ms={1000 * (time.perf_counter() - started):.1f}", file=sys.stderr)
        return 1
    _emit(report, args.format)
    print(f"elapsed_ms={1000 * (time.perf_counter() - started):.1f}", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python
"""
报告输出
- json: 键排序、无时间戳，同样的命令和种子逐字节相同
- table: 用 pandas DataFrame 渲染的终端表格
"""
import os
import sys
from typing import Any, Callable, Dict, List, Optional

import pandas as pd

# 添加项目根目录到路径
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, PROJECT_ROOT)

from config import OUTPUT
from src.utils import _to_builtin, dumps_deterministic, logger

FORMATS = ("json", "table")


def _matrix_text(rows: List[List[int]]) -> str:
    return "\n".join(" ".join(str(v) for v in row) for row in rows) if rows else "(empty)"


def _frame_text(frame: pd.DataFrame) -> str:
    if frame.empty:
        return "(no rows)"
    return frame.to_string(index=False)


def _title(text: str) -> str:
    return f"{text}\n{'=' * max(len(text), 20)}"


# ============================================
# 各类报告的表格
# ============================================

def _info_table(data: dict) -> str:
    parties = pd.DataFrame({
        "party": list(range(1, len(data["local_ranks"]) + 1)),
        "sites": data["partition"],
        "rank C": data["local_ranks"],
        "dim V_loc": data["local_dims"],
        "log rk rho": data["reduced_rank_exponents"],
    })
    lines = [
        _title("State info"),
        f"n={data['n']}  d={data['d']}  valid={data['valid']}",
        f"rank condition: {data['rank_condition']}  ({data['rank_sides'][0]} = {data['rank_sides'][1]})",
        f"Delta (GHZ extractable): {data['delta']}",
        f"extractable |0>: {data['extractable_zeros']}",
        "",
        _frame_text(parties),
    ]
    for idx, matrix in enumerate(data["commutation"]["matrices"], start=1):
        lines += ["", f"C_{idx}:", _matrix_text(matrix)]
    return "\n".join(lines)


def _congruence_table(data: dict) -> str:
    lines = [
        _title("Equivalence"),
        f"verdict: {data['verdict']}",
        f"reason: {data['reason']}",
        f"budget: {data['budget']}  searched: {data['searched']}",
    ]
    inv = data.get("invariants") or {}
    if inv.get("a"):
        keys = sorted(inv["a"])
        frame = pd.DataFrame({
            "invariant": keys,
            "A": [str(inv["a"][k]) for k in keys],
            "B": [str(inv["b"].get(k)) for k in keys],
        })
        lines += ["", _frame_text(frame)]
    if data.get("witness"):
        lines += ["", "witness Q (Q·A·Qᵀ = B):", _matrix_text(data["witness"])]
    return "\n".join(lines)


def _decomposition_table(data: dict) -> str:
    names = data.get("names") or [""] * len(data["sizes"])
    frame = pd.DataFrame({
        "block": list(range(1, len(data["sizes"]) + 1)),
        "size": data["sizes"],
        "name": names,
        "parties": [",".join(str(idx + 1) for idx, m in enumerate(b["matrices"]) if any(any(row) for row in m))
                    for b in data["blocks"]],
    })
    lines = [_title("Decomposition"), f"complete: {data['complete']}", "", _frame_text(frame)]
    if data.get("named_counts"):
        counts = data["named_counts"]
        lines += ["", f"|0>: {counts['zero']}  Bell: {counts['bell']}  GHZ: {counts['ghz']}  other: {counts['other']}"]
    if data.get("tripartite"):
        lines += ["", f"tripartite counts: {data['tripartite']}"]
    return "\n".join(lines)


def _egs_table(data: dict) -> str:
    reps = pd.DataFrame({
        "class": list(range(1, len(data["representatives"]) + 1)),
        "edges": [" ".join(f"{i}-{j}" if m == 1 else f"{i}-{j}x{m}" for i, j, m in r["edges"])
                  for r in data["representatives"]],
        "ranks": [",".join(str(v) for v in r["ranks"]) for r in data["representatives"]],
        "members": [r["members"] for r in data["representatives"]],
    })
    stats = pd.DataFrame({"stage": list(data["stats"]), "count": list(data["stats"].values())})
    lines = [
        _title(f"EGS ({','.join(str(s) for s in data['configuration'])}), d={data['d']}"),
        f"status: {data['status']}  source: {data['source']}",
        f"classes: {data['class_count']}  up to relabeling: {data['class_count_up_to_relabeling']}",
        "",
        _frame_text(reps),
        "",
        _frame_text(stats),
    ]
    if data["quarantined"]:
        quarantine = pd.DataFrame(data["quarantined"])[["key", "stage", "reason"]]
        lines += ["", "quarantined:", _frame_text(quarantine)]
    for note in data.get("notes", []):
        lines.append(f"note: {note}")
    return "\n".join(lines)


def _suite_table(data: dict) -> str:
    lines = [_title(f"Verify {data['suite']}"), f"passed: {data['passed']}"]
    if data["suite"] == "spiral":
        frame = pd.DataFrame(data["entries"])
        frame["sizes"] = frame["sizes"].map(lambda s: ",".join(str(v) for v in s))
        lines += ["", _frame_text(frame.drop(columns=["reason"]))]
    elif data["suite"] == "cosets":
        keys = ["group_order", "subgroup_order", "coset_count", "sequences_verified", "table_matches"]
        lines += ["", _frame_text(pd.DataFrame({"item": keys, "value": [data[k] for k in keys]}))]
        lines += [f"failure: {f}" for f in data["failures"]]
    else:
        frame = pd.DataFrame([
            {"check": c["name"], "passed": c["passed"], "ok": c["passed_count"], "trials": c["trials"]}
            for c in data["checks"]
        ])
        lines += ["", _frame_text(frame)]
        for c in data["checks"]:
            if c["minimal_failure"]:
                lines += ["", f"minimal failing case for {c['name']}:", dumps_deterministic(c["minimal_failure"]).rstrip()]
    return "\n".join(lines)


def _synthesis_table(data: dict) -> str:
    frame = pd.DataFrame({"generator": list(range(1, len(data["generators"]) + 1)),
                          "x|z": [" ".join(str(v) for v in g) for g in data["generators"]]})
    return "\n".join([
        _title("Synthesized tableau"),
        f"n={data['n']}  d={data['d']}  partition={data.get('partition')}",
        "",
        _frame_text(frame),
    ])


def _cache_table(data: dict) -> str:
    frame = pd.DataFrame({"item": list(data), "value": [str(v) for v in data.values()]})
    return "\n".join([_title("Cache"), _frame_text(frame)])


RENDERERS: Dict[str, Callable[[dict], str]] = {
    "info": _info_table,
    "equivalence": _congruence_table,
    "decomposition": _decomposition_table,
    "egs": _egs_table,
    "verify": _suite_table,
    "synthesis": _synthesis_table,
    "cache": _cache_table,
}


def render(kind: str, data: Any, fmt: str = None) -> str:
    """把报告渲染为文本；table 格式没有对应渲染器时退回 json"""
    fmt = OUTPUT['format'] if fmt is None else fmt
    if fmt not in FORMATS:
        raise ValueError(f"未知的输出格式: {fmt} (可选 {', '.join(FORMATS)})")
    payload = _to_builtin(data)
    if fmt == "table" and kind in RENDERERS:
        return RENDERERS[kind](payload) + "\n"
    return dumps_deterministic(payload, OUTPUT['json_indent'])


def emit(kind: str, data: Any, fmt: str = None, output: Optional[str] = None) -> str:
    """渲染后写入文件，未指定文件时输出到标准输出"""
    text = render(kind, data, fmt)
    if output:
        directory = os.path.dirname(os.path.abspath(output))
        os.makedirs(directory, exist_ok=True)
        with open(output, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"📄 报告已保存: {output}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    return text

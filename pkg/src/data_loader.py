#!/usr/bin/env python
"""
输入输出模块
功能:
1. 稳定子表 / 对易矩阵组的 JSON 读写
2. 边表文本: 每行 "i j [m]" (1 起始)，可选头部 "n=", "d=", "partition="
3. LC 轨道数据库: 每个图以 "n=<count>" 开头，图之间用空行分隔
4. graph6 -> 轨道数据库转换 (networkx 解码)

所有解析错误统一抛 ParseError，带文件路径和行号
"""
import json
import os
from typing import Iterable, Iterator, List, Optional, Tuple

import networkx as nx

from src.commutation import CommutationTuple
from src.errors import InvalidStateError, InvalidTupleError, ParseError
from src.stabilizer_states import GraphAdjacency, StabilizerTableau, graph_state
from src.symplectic_pauli import PartyPartition
from src.utils import dumps_deterministic, logger

# 边表头部关键字
HEADER_KEYS = ("n", "d", "partition")


# ============================================
# JSON
# ============================================

def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as exc:
        raise ParseError(f"无法读取文件: {exc}", path) from exc


def _read_json(path: str) -> dict:
    text = _read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"JSON 格式错误: {exc.msg}", path, exc.lineno) from exc
    if not isinstance(data, dict):
        raise ParseError("JSON 顶层必须是对象", path, 1)
    return data


def _write_text(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def _partition_from_json(data: dict, n: int, path: str) -> Optional[PartyPartition]:
    parts = data.get("partition")
    if not parts:
        return None
    try:
        if isinstance(parts, str):
            return PartyPartition.parse(parts, n)
        return PartyPartition(n, tuple(tuple(int(s) - 1 for s in p) for p in parts))
    except (InvalidStateError, TypeError, ValueError) as exc:
        raise ParseError(f"划分字段非法: {exc}", path) from exc


def load_tableau(path: str) -> Tuple[StabilizerTableau, Optional[PartyPartition]]:
    """
    读取稳定子表 JSON

    支持三种写法:
        {"n": 2, "d": 2, "generators": [[1,0,0,1], [0,1,1,0]]}
        {"paulis": ["XZ", "ZX"]}                (仅 d = 2)
        {"n": 3, "d": 2, "edges": [[1,2], [2,3]]} (图态，1 起始)
    可选 "partition": [[1], [2,3]] 或 "1|2,3"
    """
    data = _read_json(path)
    try:
        if "generators" in data:
            tableau = StabilizerTableau.from_dict(data)
        elif "paulis" in data:
            tableau = StabilizerTableau.from_pauli_strings(data["paulis"], data.get("phases") or ())
        elif "edges" in data:
            n = int(data["n"])
            d = int(data.get("d", 2))
            edges = [(int(e[0]) - 1, int(e[1]) - 1, *[int(x) for x in e[2:]]) for e in data["edges"]]
            tableau = graph_state(GraphAdjacency.from_edges(n, edges, d))
        else:
            raise ParseError("缺少 generators / paulis / edges 字段", path)
    except (InvalidStateError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"稳定子表非法: {exc}", path) from exc
    return tableau, _partition_from_json(data, tableau.n, path)


def save_tableau(path: str, tableau: StabilizerTableau, partition: Optional[PartyPartition] = None):
    data = tableau.to_dict()
    if partition is not None:
        data["partition"] = partition.to_list()
    _write_text(path, dumps_deterministic(data))


def load_tuple(path: str) -> CommutationTuple:
    """读取 {"n", "d", "parties", "matrices", ["partition"]} 格式的对易矩阵组"""
    data = _read_json(path)
    try:
        return CommutationTuple.from_dict(data)
    except (InvalidTupleError, InvalidStateError) as exc:
        raise ParseError(f"对易矩阵组非法: {exc}", path) from exc


def save_tuple(path: str, c: CommutationTuple):
    _write_text(path, dumps_deterministic(c.to_dict()))


# ============================================
# 边表
# ============================================

def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_header(token: str, path: Optional[str], lineno: int) -> Tuple[str, str]:
    key, _, value = token.partition("=")
    key = key.strip().lower()
    if key not in HEADER_KEYS:
        raise ParseError(f"未知的头部字段 '{key}'", path, lineno)
    return key, value.strip()


def _parse_edge(text: str, path: Optional[str], lineno: int) -> Tuple[int, int, int]:
    tokens = text.split()
    if len(tokens) not in (2, 3):
        raise ParseError(f"边的格式应为 'i j [m]': '{text}'", path, lineno)
    try:
        values = [int(tok) for tok in tokens]
    except ValueError as exc:
        raise ParseError(f"边中含非整数: '{text}'", path, lineno) from exc
    if values[0] < 1 or values[1] < 1:
        raise ParseError(f"顶点编号从 1 开始: '{text}'", path, lineno)
    m = values[2] if len(values) == 3 else 1
    return values[0] - 1, values[1] - 1, m


def _build_graph(n: Optional[int], edges: List[Tuple[int, int, int]], d: int,
                 path: Optional[str], lineno: int) -> GraphAdjacency:
    if n is None:
        n = max((max(i, j) + 1 for i, j, _ in edges), default=0)
    try:
        return GraphAdjacency.from_edges(n, edges, d)
    except InvalidStateError as exc:
        raise ParseError(str(exc), path, lineno) from exc


def parse_edge_list(lines: Iterable[str], d: int = 2,
                    path: Optional[str] = None) -> Tuple[GraphAdjacency, Optional[PartyPartition]]:
    """
    解析单个图的边表

    没有 "n=" 头部时顶点数取最大编号；"d=" 头部覆盖参数 d
    """
    n = None
    partition_text = None
    edges = []
    last = 0
    for lineno, raw in enumerate(lines, start=1):
        text = _strip_comment(raw)
        if not text:
            continue
        last = lineno
        if "=" in text:
            key, value = _parse_header(text, path, lineno)
            try:
                if key == "n":
                    n = int(value)
                elif key == "d":
                    d = int(value)
                else:
                    partition_text = value
            except ValueError as exc:
                raise ParseError(f"头部 '{text}' 的值不是整数", path, lineno) from exc
            continue
        edges.append(_parse_edge(text, path, lineno))

    graph = _build_graph(n, edges, d, path, last)
    partition = None
    if partition_text:
        try:
            partition = PartyPartition.parse(partition_text, graph.n)
        except InvalidStateError as exc:
            raise ParseError(f"划分非法: {exc}", path, last) from exc
    return graph, partition


def load_edge_list(path: str, d: int = 2) -> Tuple[GraphAdjacency, Optional[PartyPartition]]:
    return parse_edge_list(_read_text(path).splitlines(), d, path)


def format_edge_list(g: GraphAdjacency, partition: Optional[PartyPartition] = None) -> str:
    lines = [f"n={g.n}"]
    if g.d != 2:
        lines.append(f"d={g.d}")
    if partition is not None:
        lines.append(f"partition={partition}")
    for i, j, m in g.edges():
        lines.append(f"{i + 1} {j + 1}" if m == 1 else f"{i + 1} {j + 1} {m}")
    return "\n".join(lines) + "\n"


def load_state(path: str, d: int = 2) -> Tuple[StabilizerTableau, Optional[PartyPartition]]:
    """按扩展名分派: .json 为稳定子表，其余按边表解析为图态"""
    if path.lower().endswith(".json"):
        return load_tableau(path)
    graph, partition = load_edge_list(path, d)
    return graph_state(graph), partition


# ============================================
# LC 轨道数据库
# ============================================

def iter_orbit_database(lines: Iterable[str], d: int = 2,
                        path: Optional[str] = None) -> Iterator[GraphAdjacency]:
    """
    逐个产出数据库中的图

    每块第一行必须是 "n=<count>"；空行结束一个块
    """
    n = None
    edges: List[Tuple[int, int, int]] = []
    header_line = 0
    in_block = False

    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped:
            if in_block:
                yield _build_graph(n, edges, d, path, header_line)
                n, edges, in_block = None, [], False
            continue
        text = _strip_comment(stripped)
        if not text:
            continue
        if not in_block:
            if not text.lower().startswith("n="):
                raise ParseError(f"每个图必须以 'n=<count>' 开头, 得到 '{text}'", path, lineno)
            try:
                n = int(text[2:].strip())
            except ValueError as exc:
                raise ParseError(f"顶点数不是整数: '{text}'", path, lineno) from exc
            if n < 1:
                raise ParseError(f"顶点数必须 >= 1: {n}", path, lineno)
            header_line = lineno
            in_block = True
            continue
        i, j, m = _parse_edge(text, path, lineno)
        if i >= n or j >= n:
            raise ParseError(f"边 ({i + 1}, {j + 1}) 超出 n={n}", path, lineno)
        edges.append((i, j, m))

    if in_block:
        yield _build_graph(n, edges, d, path, header_line)


def read_orbit_database(path: str, d: int = 2) -> List[GraphAdjacency]:
    graphs = list(iter_orbit_database(_read_text(path).splitlines(), d, path))
    logger.debug(f"轨道数据库 {path}: {len(graphs)} 个图")
    return graphs


def format_orbit_database(graphs: Iterable[GraphAdjacency]) -> str:
    blocks = []
    for g in graphs:
        lines = [f"n={g.n}"]
        for i, j, m in g.edges():
            lines.append(f"{i + 1} {j + 1}" if m == 1 else f"{i + 1} {j + 1} {m}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def write_orbit_database(path: str, graphs: Iterable[GraphAdjacency]) -> int:
    graphs = list(graphs)
    _write_text(path, format_orbit_database(graphs))
    return len(graphs)


def convert_graph6_to_orbit_database(lines: Iterable[str], path: Optional[str] = None) -> List[GraphAdjacency]:
    """graph6 每行一个图 (可带 >>graph6<< 头)，空行和 # 注释跳过"""
    graphs = []
    for lineno, raw in enumerate(lines, start=1):
        text = _strip_comment(raw)
        if not text:
            continue
        try:
            decoded = nx.from_graph6_bytes(text.encode("ascii"))
        except (nx.NetworkXError, ValueError, UnicodeEncodeError) as exc:
            raise ParseError(f"graph6 解码失败: {exc}", path, lineno) from exc
        graphs.append(GraphAdjacency.from_networkx(decoded, 2))
    return graphs


def convert_graph6_file(src_path: str, dst_path: str) -> int:
    graphs = convert_graph6_to_orbit_database(_read_text(src_path).splitlines(), src_path)
    count = write_orbit_database(dst_path, graphs)
    logger.info(f"✅ 已转换 {count} 个图: {src_path} -> {dst_path}")
    return count

import pytest

from chatfsm.dot import (
    DotOptions,
    DotSyntaxError,
    RankDirection,
    diff_overlay,
    scan_dot,
    to_dot,
)
from chatfsm.errors import FsmValidationError
from chatfsm.model import parse_fsm_json

from conftest import PAIRS_DIR
from helpers import make_doc, make_fsm, navigation_fsm


def four_state_loop_fsm():
    """Initial, two middle states with a self-loop and a back edge, one sink."""
    return make_fsm("demo", "BEGIN", [
        ("BEGIN", [("step", "WORK")]),
        ("WORK", [("again", "WORK"), ("step", "CHECK")]),
        ("CHECK", [("retry", "WORK"), ("step", "END")]),
        ("END", []),
    ])


class TestToDot:
    def test_four_state_loop_counts(self):
        dot = to_dot(make_doc(four_state_loop_fsm()))
        graphs = scan_dot(dot)["graphs"]
        assert len(graphs) == 1
        assert graphs[0]["nodes"] == 5    # 4 states + start point
        assert graphs[0]["edges"] == 6    # 5 labeled + 1 start edge

    def test_one_state_machine(self):
        dot = to_dot(make_doc(make_fsm("tiny", "S", [("S", [])])))
        graphs = scan_dot(dot)["graphs"]
        assert graphs[0]["nodes"] == 2
        assert graphs[0]["edges"] == 1
        assert '"S" [shape=doublecircle];' in dot

    def test_byte_deterministic(self):
        doc = make_doc(navigation_fsm())
        assert to_dot(doc) == to_dot(doc)

    def test_emitted_text_is_valid_dot(self):
        for doc in (
            make_doc(navigation_fsm()),
            make_doc(four_state_loop_fsm()),
            make_doc(make_fsm("tiny", "S", [("S", [])])),
        ):
            scan_dot(to_dot(doc))

    def test_every_edge_labeled_with_outcome(self):
        dot = to_dot(make_doc(navigation_fsm()))
        assert 'label="Start Command"' in dot
        assert 'label="Obstacle Detected"' in dot

    def test_start_edge_targets_initial_state(self):
        dot = to_dot(make_doc(navigation_fsm()))
        assert '"__start__" -> "Idle";' in dot

    def test_rank_direction(self):
        doc = make_doc(navigation_fsm())
        assert "rankdir=LR;" in to_dot(doc)
        assert "rankdir=TB;" in to_dot(doc, DotOptions(
            rank_direction=RankDirection.TOP_BOTTOM))

    def test_nodes_and_edges_sorted(self):
        dot = to_dot(make_doc(four_state_loop_fsm()))
        lines = dot.splitlines()
        node_lines = [l for l in lines if l.startswith('  "') and "->" not in l
                      and "point" not in l]
        names = [l.split('"')[1] for l in node_lines]
        assert names == sorted(names)
        edge_lines = [l for l in lines if "->" in l and "__start__" not in l]
        pairs = [(l.split('"')[1], l.split('"')[3]) for l in edge_lines]
        assert pairs == sorted(pairs)

    def test_label_escaping_round_trips(self):
        fsm = make_fsm("odd", 'He said "go"\\now', [
            ('He said "go"\\now', []),
        ])
        dot = to_dot(make_doc(fsm))
        scan_dot(dot)
        assert '\\"go\\"' in dot

    def test_multiple_fsms_one_digraph_each(self):
        doc = make_doc(make_fsm("first", "A", [("A", [])]),
                       make_fsm("second", "B", [("B", [])]))
        graphs = scan_dot(to_dot(doc))["graphs"]
        assert [g["name"] for g in graphs] == ['"first"', '"second"']

    def test_invalid_document_refused(self):
        doc = make_doc(make_fsm("M", "GHOST", [("A", [])]))
        with pytest.raises(FsmValidationError):
            to_dot(doc)

    def test_start_identifier_avoids_collision(self):
        fsm = make_fsm("M", "__start__", [("__start__", [])])
        dot = to_dot(make_doc(fsm))
        assert '"__start___"' in dot
        scan_dot(dot)


class TestDiffOverlay:
    def load(self, pair_id):
        pair = PAIRS_DIR / pair_id
        parent = parse_fsm_json((pair / "parent_fsm.json").read_text())
        child = parse_fsm_json((pair / "ground_true.json").read_text())
        return parent, child

    def test_empty_diff_equals_plain_output(self):
        doc = make_doc(navigation_fsm())
        assert diff_overlay(doc, doc) == to_dot(doc)

    def test_pair5_dashed_counts(self):
        parent, child = self.load("pair5")
        dot = diff_overlay(parent, child)
        scan_dot(dot)
        lines = dot.splitlines()
        dashed_nodes = [l for l in lines if "style=dashed" in l and "->" not in l]
        dashed_edges = [l for l in lines if "style=dashed" in l and "->" in l]
        assert len(dashed_nodes) == 2
        assert len(dashed_edges) == 4

    def test_removed_state_ghosted(self):
        bigger = make_doc(make_fsm("M", "A", [("A", [("go", "B")]), ("B", [])]))
        smaller = make_doc(make_fsm("M", "A", [("A", [])]))
        dot = diff_overlay(bigger, smaller)
        scan_dot(dot)
        ghost_nodes = [l for l in dot.splitlines()
                       if "style=dotted" in l and "->" not in l]
        assert len(ghost_nodes) == 1
        assert '"B"' in ghost_nodes[0]
        ghost_edges = [l for l in dot.splitlines()
                       if "style=dotted" in l and "->" in l]
        assert len(ghost_edges) == 1


class TestScanDot:
    def test_rejects_unterminated_string(self):
        with pytest.raises(DotSyntaxError):
            scan_dot('digraph "broken { }')

    def test_rejects_missing_brace(self):
        with pytest.raises(DotSyntaxError):
            scan_dot('digraph "m" { "a";')

    def test_rejects_garbage(self):
        with pytest.raises(DotSyntaxError):
            scan_dot("this is not dot")

    def test_counts_statements(self):
        counts = scan_dot('digraph "m" {\n  "a";\n  "b" [shape=box];\n'
                          '  "a" -> "b" [label="x"];\n}\n')["graphs"][0]
        assert counts == {"name": '"m"', "nodes": 2, "edges": 1}

import json
import re
from pathlib import Path

import networkx as nx

from tbt.cli import main
from tbt.matrix_io import format_matrices, load_matrices, parse_matrices
from tbt.tropical_core import normalize

from example_data import NINE_GON, THREE_LATTICES_FIRST_PASS, TREE_ROWS, eight_vector_matrix, tree_row_matches

DATA = Path(__file__).resolve().parent.parent / "data"


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 0, err
    return json.loads(out)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


# --- parsing --------------------------------------------------------------------------

def test_eight_vector_file_parses_to_membrane():
    (M,) = load_matrices(DATA / "eight_vectors.txt")
    assert M == eight_vector_matrix()


def test_sum_of_equal_terms_is_canonical():
    (M,) = parse_matrices("z^-3 + z^-3, 1\n0, z\n")
    assert str(M[0, 0]) == "2*z^-3"


def test_print_parse_roundtrip():
    mats = load_matrices(DATA / "polygon_lattices_b3.txt") + load_matrices(DATA / "three_lattices_b3.txt")
    assert parse_matrices(format_matrices(mats)) == mats


def test_malformed_entry_exit_code(tmp_path, capsys):
    f = write(tmp_path, "bad.txt", "1 z^\n0 1\n")
    code, _, err = run(["minconv", f], capsys)
    assert code == 2
    assert "ParseError" in err and "line 1" in err


def test_ragged_rows_exit_code(tmp_path, capsys):
    f = write(tmp_path, "ragged.txt", "1 0\n0\n")
    code, _, err = run(["minconv", f], capsys)
    assert code == 3


def test_mixed_dimensions_exit_code(tmp_path, capsys):
    f = write(tmp_path, "mixed.txt", "1 0\n0 1\n\n1 0 0\n0 1 0\n0 0 1\n")
    code, _, _ = run(["minconv", f], capsys)
    assert code == 3


def test_singular_exit_code(tmp_path, capsys):
    f = write(tmp_path, "sing.txt", "1 1\n1 1\n")
    code, _, err = run(["minconv", f], capsys)
    assert code == 4
    assert "SingularMatrix" in err


def test_rank_deficient_membrane_exit_code(tmp_path, capsys):
    f = write(tmp_path, "flat.txt", "1 1 z\n1 1 z\n")
    code, _, _ = run(["intersect-membranes", f, f], capsys)
    assert code == 5


def test_missing_file_exit_code(tmp_path, capsys):
    code, _, _ = run(["minconv", tmp_path / "nope.txt"], capsys)
    assert code == 1


def test_rational_flag(tmp_path, capsys):
    f = write(tmp_path, "rat.txt", "1/(1+z) 0\n0 1\n")
    code, _, _ = run(["minconv", f], capsys)
    assert code == 2
    doc = run_json(["minconv", "--rational", f], capsys)
    assert len(doc["points"]) == 1


def test_unrenderable_exit_code(tmp_path, capsys):
    f = write(tmp_path, "simplex.txt", "0 1 1 1\n1 0 1 1\n1 1 0 1\n1 1 1 0\n")
    code, _, err = run(["tropical-hull", "--render", "svg", "--render-path", tmp_path / "x.svg", f], capsys)
    assert code == 13
    assert "UnrenderableDimension" in err


# --- commands ---------------------------------------------------------------------------

def test_minconv_tree_example(capsys):
    doc = run_json(["minconv", DATA / "four_lattices_b2.txt"], capsys)
    assert len(doc["points"]) == 11
    rows = {tuple(normalize(p["u"])): [tuple(e - 1 for e in b) for b in p["matroid_bases"]] for p in doc["points"]}
    for u, listed, last in TREE_ROWS:
        assert tree_row_matches(rows[normalize(u)], listed, last)
    assert doc["complex"]["f_vector"] == [11, 10]


def test_minconv_three_lattices(capsys):
    doc = run_json(["minconv", DATA / "three_lattices_b3.txt"], capsys)
    assert len(doc["points"]) == 7
    assert len(doc["membrane"][0]) == 12
    assert [tuple(g) for g in doc["first_pass"]["generators"]] == THREE_LATTICES_FIRST_PASS


def test_maxconv_single_class(tmp_path, capsys):
    f = write(tmp_path, "one.txt", "z 1\n0 1\n")
    doc = run_json(["maxconv", f], capsys)
    assert len(doc["points"]) == 1


def test_retract_onto_own_membrane(capsys):
    f = DATA / "polygon_lattices_b3.txt"
    doc = run_json(["retract", "--membrane", f, f], capsys)
    assert tuple(tuple(g) for g in doc["generators"]) == tuple(NINE_GON)
    assert len(doc["lattice_points"]) == 31


def test_tropical_hull(capsys):
    doc = run_json(["tropical-hull", DATA / "polygon_generators.txt"], capsys)
    assert doc["cells"]["f_vector"] == [19, 28, 10]
    assert doc["triangulation"]["f_vector"] == [31, 62, 32]
    assert len(doc["lattice_points"]) == 31


def test_project_onto_polytope(tmp_path, capsys):
    f = write(tmp_path, "tri.txt", "1 0 0\n0 1 0\n0 0 1\n")
    doc = run_json(["project", "--point", "0,1,1", f], capsys)
    assert normalize(doc["projection"]) == (0, 0, 0)


def test_project_onto_linear_space(capsys):
    doc = run_json(["project", "--linear-space", "--point", "0,0,0,0,0,0,0,0", DATA / "eight_vectors.txt"], capsys)
    assert doc["agree"] and doc["in_linear_space"]


def test_project_onto_matroid_json(tmp_path, capsys):
    from tbt.valuated_matroid import uniform

    f = write(tmp_path, "u24.json", json.dumps(uniform(4, 2).to_json()))
    doc = run_json(["project", "--linear-space", "--point", "0,1,2,3", f], capsys)
    assert doc["agree"] and doc["in_linear_space"]


def test_intersect_apartments_and_membranes(tmp_path, capsys):
    f = write(tmp_path, "two.txt", "1 0\n0 1\n\n1 1\n1 z^-1\n")
    ap = run_json(["intersect-apartments", f], capsys)
    mem = run_json(["intersect-membranes", f], capsys)
    assert [p["u"] for p in ap["points"]] == [p["u"] for p in mem["points"]] == [[0, 0], [0, 1]]
    assert ap["unbounded"] is False
    assert ap["inversion_domain"] == [[0, 1], [0, 0]]


def test_box_margin_flag(tmp_path, capsys):
    f = write(tmp_path, "same.txt", "1 0\n0 1\n\n1 0\n0 1\n")
    small = run_json(["intersect-apartments", "--box-margin", "1", f], capsys)
    big = run_json(["intersect-apartments", "--box-margin", "3", f], capsys)
    assert small["unbounded"] and big["unbounded"]
    assert len(big["points"]) - len(small["points"]) == 4


# --- output files and rendering -----------------------------------------------------------

def test_json_file_and_byte_identical_reruns(tmp_path, capsys):
    outs = []
    for k in range(2):
        j = tmp_path / f"hull{k}.json"
        assert main(["minconv", "--json", str(j), "--render", "dot", str(DATA / "four_lattices_b2.txt")]) == 0
        outs.append((j.read_bytes(), j.with_suffix(".dot").read_bytes()))
    assert outs[0] == outs[1]
    capsys.readouterr()


def test_dot_tree_has_four_leaves_and_seven_interior_nodes(tmp_path):
    dot = tmp_path / "tree.dot"
    assert main(["minconv", "--json", str(tmp_path / "t.json"), "--render", "dot", "--render-path", str(dot),
                 str(DATA / "four_lattices_b2.txt")]) == 0
    text = dot.read_text()
    edges = re.findall(r"n(\d+) -- n(\d+)", text)
    g = nx.Graph([(int(a), int(b)) for a, b in edges])
    assert g.number_of_nodes() == 11 and nx.is_tree(g)
    degrees = [d for _, d in g.degree()]
    assert degrees.count(1) == 4
    assert len(degrees) - degrees.count(1) == 7


def test_svg_of_polygon(tmp_path):
    paths = []
    for k in range(2):
        svg = tmp_path / f"poly{k}.svg"
        assert main(["tropical-hull", "--json", str(tmp_path / f"p{k}.json"), "--render", "svg",
                     "--render-path", str(svg), str(DATA / "polygon_generators.txt")]) == 0
        paths.append(svg)
    text = paths[0].read_text()
    assert len(set(re.findall(r'id="vertex-\d+"', text))) == 31
    assert len(set(re.findall(r'id="edge-\d+"', text))) == 62
    assert len(set(re.findall(r'id="triangle-\d+"', text))) == 32
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_svg_of_hull_in_b3(tmp_path):
    svg = tmp_path / "h.svg"
    js = tmp_path / "h.json"
    assert main(["minconv", "--json", str(js), "--render", "svg", "--render-path", str(svg),
                 str(DATA / "three_lattices_b3.txt")]) == 0
    doc = json.loads(js.read_text())
    text = svg.read_text()
    n_edges = sum(1 for s in doc["complex"]["simplices"] if len(s) == 2)
    assert len(set(re.findall(r'id="vertex-\d+"', text))) == len(doc["points"]) == 7
    assert len(set(re.findall(r'id="edge-\d+"', text))) == n_edges


def test_single_class_renders_one_node(tmp_path, capsys):
    f = write(tmp_path, "one.txt", "1 0\n0 1\n")
    dot = tmp_path / "one.dot"
    code, _, _ = run(["minconv", "--render", "dot", "--render-path", dot, f], capsys)
    assert code == 0
    text = dot.read_text()
    assert len(re.findall(r"n\d+ \[", text)) == 1
    assert "--" not in text

"""Hand-built pants complexes, drawn in the plane and read off by hand.

Triangles run counter-clockwise, boundary cycles keep their hole on the
left: the outer boundary runs clockwise, inner holes counter-clockwise.
"""

from pantslab.pants import pants_from_names


def theta():
    """Two points joined by three edges; boundary lengths (2, 2, 2)."""
    edges = {"e1": ("u", "v"), "e2": ("u", "v"), "e3": ("u", "v")}
    return pants_from_names(edges, [], [["e2", "-e1"], ["e3", "-e2"], ["e1", "-e3"]])


def glasses():
    """Two loops joined by an edge; lengths (1, 1, 4) break the triangle inequality."""
    edges = {"e1": ("u", "u"), "e2": ("u", "v"), "e3": ("v", "v")}
    return pants_from_names(edges, [], [["e1"], ["e3"], ["e2", "-e3", "-e2", "-e1"]])


def figure():
    """Four disk clusters: A (a triangle), two loose squares B and D, and a point C.

    A sits on top and C at the bottom; they are joined directly and
    through B on the left and D on the right.  B and D are entered at
    opposite corners, so both of their arcs have length 2.
    """
    edges = {
        "a02": ("a0", "a2"), "a21": ("a2", "a1"), "a10": ("a1", "a0"),
        "b01": ("b0", "b1"), "b12": ("b1", "b2"), "b20": ("b2", "b0"),
        "b23": ("b2", "b3"), "b30": ("b3", "b0"),
        "d01": ("d0", "d1"), "d12": ("d1", "d2"), "d20": ("d2", "d0"),
        "d23": ("d2", "d3"), "d30": ("d3", "d0"),
        "sAB": ("a1", "b0"), "sBC": ("b2", "c"), "sAD": ("a2", "d0"),
        "sDC": ("d2", "c"), "sAC": ("a0", "c"),
    }
    triangles = [
        ["a02", "a21", "a10"],
        ["b01", "b12", "b20"], ["-b20", "b23", "b30"],
        ["d01", "d12", "d20"], ["-d20", "d23", "d30"],
    ]
    boundaries = [
        ["-a21", "sAD", "-d30", "-d23", "sDC", "-sBC", "-b12", "-b01", "-sAB"],
        ["-sAC", "-a10", "sAB", "-b30", "-b23", "sBC"],
        ["sAC", "-sDC", "-d12", "-d01", "-sAD", "-a02"],
    ]
    return pants_from_names(edges, triangles, boundaries)


def annulus_with_chord():
    """An annulus of six triangles whose hole is split by one strand."""
    edges = {}
    triangles = []
    for k in range(3):
        n = (k + 1) % 3
        edges[f"O{k}"] = (f"o{k}", f"o{n}")
        edges[f"I{k}"] = (f"i{k}", f"i{n}")
        edges[f"S{k}"] = (f"i{k}", f"o{k}")
        edges[f"X{k}"] = (f"i{k}", f"o{n}")
    for k in range(3):
        n = (k + 1) % 3
        triangles.append([f"O{k}", f"-X{k}", f"S{k}"])
        triangles.append([f"X{k}", f"-S{n}", f"-I{k}"])
    edges["C"] = ("i0", "i1")
    boundaries = [["-O2", "-O1", "-O0"], ["I0", "-C"], ["C", "I1", "I2"]]
    return pants_from_names(edges, triangles, boundaries)


def lopsided():
    """Like :func:`figure`, but B is entered at adjacent corners b0 and b1.

    B's arcs then have lengths 1 (outer boundary) and 3 (left boundary).
    """
    edges = {
        "a02": ("a0", "a2"), "a21": ("a2", "a1"), "a10": ("a1", "a0"),
        "b01": ("b0", "b1"), "b12": ("b1", "b2"), "b20": ("b2", "b0"),
        "b23": ("b2", "b3"), "b30": ("b3", "b0"),
        "d01": ("d0", "d1"), "d12": ("d1", "d2"), "d20": ("d2", "d0"),
        "d23": ("d2", "d3"), "d30": ("d3", "d0"),
        "sAB": ("a1", "b0"), "sBC": ("b1", "c"), "sAD": ("a2", "d0"),
        "sDC": ("d2", "c"), "sAC": ("a0", "c"),
    }
    triangles = [
        ["a02", "a21", "a10"],
        ["b01", "b12", "b20"], ["-b20", "b23", "b30"],
        ["d01", "d12", "d20"], ["-d20", "d23", "d30"],
    ]
    boundaries = [
        ["-a21", "sAD", "-d30", "-d23", "sDC", "-sBC", "-b01", "-sAB"],
        ["-sAC", "-a10", "sAB", "-b30", "-b23", "-b12", "sBC"],
        ["sAC", "-sDC", "-d12", "-d01", "-sAD", "-a02"],
    ]
    return pants_from_names(edges, triangles, boundaries)

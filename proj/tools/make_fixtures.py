#!/usr/bin/env python3
"""Write the JSON fixtures in data/."""

import json
import math
import os
import sys

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data")


def grid(nx, ny):
    vid = lambda i, j: (i % nx) + nx * (j % ny)
    quads = [[vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)] for j in range(ny) for i in range(nx)]
    return vid, quads


def edges_of(faces):
    out = set()
    for f in faces:
        for k in range(len(f)):
            u, v = f[k], f[(k + 1) % len(f)]
            out.add((min(u, v), max(u, v)))
    return sorted(out)


def problem(geometry, vertices, faces, tangent=(), theta=None, Theta=None):
    j = {
        "geometry": geometry,
        "vertices": [{"id": v, "circle": c} for v, c in vertices],
        "faces": faces,
        "tangent_edges": [list(e) for e in tangent],
    }
    if theta is not None:
        j["theta"] = theta
        j["Theta"] = Theta or {}
    return j


def grid_torus():
    _, quads = grid(3, 3)
    verts = [(v, "point") for v in range(9)]
    theta = {f"{u}-{v}": math.pi / 2 for u, v in edges_of(quads)}
    return problem("euclidean", verts, quads, theta=theta, Theta={})


def grid_torus_disk_vertex():
    j = grid_torus()
    j["vertices"][0]["circle"] = "disk"
    j["Theta"] = {"0": 2 * math.pi}
    return j


def grid_torus_tangent():
    _, quads = grid(3, 3)
    return problem("euclidean", [(v, "disk") for v in range(9)], quads, tangent=edges_of(quads))


def grid_torus_triangulated():
    vid, _ = grid(3, 3)
    tris = []
    for j in range(3):
        for i in range(3):
            tris.append([vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)])
            tris.append([vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)])
    return problem("euclidean", [(v, "disk") for v in range(9)], tris)


def tetrahedron():
    faces = [[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]]
    return problem("euclidean", [(v, "disk") for v in range(4)], faces)


def one_vertex_torus():
    return problem("euclidean", [(0, "point")], [[0, 0, 0, 0]])


def hexagon_torus():
    # 4x3 grid torus with quads (0,0) and (1,0) merged into one hexagon.
    vid, quads = grid(4, 3)
    hexagon = [vid(0, 0), vid(1, 0), vid(2, 0), vid(2, 1), vid(1, 1), vid(0, 1)]
    faces = [hexagon] + quads[2:]
    verts = [(v, "point" if (v % 4) % 2 == 0 else "disk") for v in range(12)]
    tangent = [(vid(3, j), vid(3, j + 1)) for j in range(3)]
    tangent = [(min(e), max(e)) for e in tangent]
    return problem("hyperbolic", verts, faces, tangent=tangent)


def pentagon_torus():
    # 4x3 grid torus; quad (1,0) is split and one half merged into quad (0,0).
    vid, quads = grid(4, 3)
    pentagon = [vid(0, 0), vid(1, 0), vid(2, 1), vid(1, 1), vid(0, 1)]
    triangle = [vid(1, 0), vid(2, 0), vid(2, 1)]
    faces = [pentagon, triangle] + quads[2:]
    tangent = [(vid(i, 0), vid(i + 1, 0)) for i in range(4)]
    tangent = [(min(e), max(e)) for e in tangent]
    return problem("hyperbolic", [(v, "disk") for v in range(12)], faces, tangent=tangent)


def genus2():
    # Connected sum of two triangulated 3x3 tori along one removed triangle each.
    vid, _ = grid(3, 3)
    tris = []
    for j in range(3):
        for i in range(3):
            tris.append([vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)])
            tris.append([vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)])
    a0, a1, a2 = tris[0]
    faces = [list(t) for t in tris[1:]]
    b = {tris[0][0]: a0, tris[0][1]: a2, tris[0][2]: a1}
    nxt = 9
    for v in range(9):
        if v not in b:
            b[v] = nxt
            nxt += 1
    faces += [[b[v] for v in t] for t in tris[1:]]
    verts = [(v, "point" if v % 4 == 3 else "disk") for v in range(nxt)]
    disk = {v for v, c in verts if c == "disk"}
    tangent = [e for e in edges_of(faces) if e[0] in disk and e[1] in disk][:4:2]
    return problem("hyperbolic", verts, faces, tangent=tangent)


FIXTURES = {
    "grid_torus.json": grid_torus,
    "grid_torus_disk_vertex.json": grid_torus_disk_vertex,
    "grid_torus_tangent.json": grid_torus_tangent,
    "grid_torus_triangulated.json": grid_torus_triangulated,
    "tetrahedron.json": tetrahedron,
    "one_vertex_torus.json": one_vertex_torus,
    "hexagon_torus.json": hexagon_torus,
    "pentagon_torus.json": pentagon_torus,
    "genus2.json": genus2,
}


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else OUT
    os.makedirs(out, exist_ok=True)
    for name, make in FIXTURES.items():
        with open(os.path.join(out, name), "w") as fh:
            json.dump(make(), fh, indent=1)
            fh.write("\n")


if __name__ == "__main__":
    main()

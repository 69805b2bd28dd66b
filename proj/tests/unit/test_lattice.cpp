#include <doctest.h>

#include <algorithm>
#include <set>

#include "fermistab/lattice.hpp"

using namespace fermistab;

TEST_CASE("construction rejects odd or tiny sides") {
    CHECK_THROWS(SquareLattice(0));
    CHECK_THROWS(SquareLattice(1));
    CHECK_THROWS(SquareLattice(3));
    CHECK_THROWS(SquareLattice(5));
    CHECK_NOTHROW(SquareLattice(2));
    CHECK_NOTHROW(SquareLattice(4));
    CHECK_NOTHROW(SquareLattice(8));
}

TEST_CASE("counts and qubit layout") {
    for (std::size_t L : {2u, 4u, 8u}) {
        SquareLattice lat(L);
        CHECK(lat.num_vertices() == L * L);
        CHECK(lat.num_edges() == 2 * L * L);
        CHECK(lat.num_faces() == L * L);
        CHECK(lat.num_qubits() == 3 * L * L / 2);
        CHECK(lat.blue_faces().size() == L * L / 2);
        CHECK(lat.red_faces().size() == L * L / 2);

        // Vertex qubits are the identity; blue-face qubits fill the rest.
        std::set<uint32_t> face_qubits;
        for (uint32_t f : lat.blue_faces()) {
            uint32_t q = lat.face_qubit(f);
            CHECK(q >= L * L);
            CHECK(q < 3 * L * L / 2);
            face_qubits.insert(q);
        }
        CHECK(face_qubits.size() == L * L / 2);
        for (uint32_t v = 0; v < L * L; ++v) CHECK(lat.vertex_qubit(v) == v);
        for (uint32_t f : lat.red_faces()) CHECK_THROWS(lat.face_qubit(f));
    }
}

TEST_CASE("coordinate helpers wrap periodically") {
    SquareLattice lat(4);
    CHECK(lat.wrap(-1) == 3);
    CHECK(lat.wrap(4) == 0);
    CHECK(lat.vertex_at(1, 2) == 9);
    CHECK(lat.vertex_at(-1, 0) == 3);
    CHECK(lat.vertex_at(4, 5) == 4);
    CHECK(lat.h_edge_at(3, 1) == 7);
    CHECK(lat.v_edge_at(1, 0) == 17);
    CHECK(lat.face_at(1, 2) == 9);
}

TEST_CASE("face colouring alternates like a checkerboard") {
    SquareLattice lat(4);
    for (const LatticeFace& f : lat.faces()) {
        CHECK(f.blue == ((f.x + f.y) % 2 == 0));
    }
    SquareLattice flipped(4, true);
    for (const LatticeFace& f : flipped.faces()) {
        CHECK(f.blue == ((f.x + f.y) % 2 == 1));
    }
    CHECK(flipped.colors_flipped());
}

TEST_CASE("edge orientation follows the row and column parity rules") {
    SquareLattice lat(4);
    for (const LatticeEdge& e : lat.edges()) {
        const char* name = edge_dir_name(e.dir);
        CHECK(name != nullptr);
        if (e.horizontal) {
            uint32_t y = e.id / 4;
            uint32_t x = e.id % 4;
            if (y % 2 == 0) {
                CHECK(e.dir == EdgeDir::Right);
                CHECK(e.tail == lat.vertex_at(x, y));
                CHECK(e.head == lat.vertex_at(x + 1, y));
            } else {
                CHECK(e.dir == EdgeDir::Left);
                CHECK(e.tail == lat.vertex_at(x + 1, y));
                CHECK(e.head == lat.vertex_at(x, y));
            }
        } else {
            uint32_t rel = e.id - 16;
            uint32_t y = rel / 4;
            uint32_t x = rel % 4;
            if (x % 2 == 0) {
                CHECK(e.dir == EdgeDir::Up);
                CHECK(e.tail == lat.vertex_at(x, y));
                CHECK(e.head == lat.vertex_at(x, y + 1));
            } else {
                CHECK(e.dir == EdgeDir::Down);
                CHECK(e.tail == lat.vertex_at(x, y + 1));
                CHECK(e.head == lat.vertex_at(x, y));
            }
        }
    }
}

TEST_CASE("every edge borders one blue and one red face") {
    for (std::size_t L : {2u, 4u}) {
        SquareLattice lat(L);
        for (const LatticeEdge& e : lat.edges()) {
            CHECK(lat.face_is_blue(e.blue_face));
            CHECK(!lat.face_is_blue(e.red_face));
            // The two candidate faces of the edge.
            uint32_t x, y;
            if (e.horizontal) {
                y = e.id / L;
                x = e.id % L;
                uint32_t above = lat.face_at(x, y), below = lat.face_at(x, (long)y - 1);
                CHECK(((e.blue_face == above && e.red_face == below) ||
                       (e.blue_face == below && e.red_face == above)));
            } else {
                uint32_t rel = e.id - L * L;
                y = rel / L;
                x = rel % L;
                uint32_t right = lat.face_at(x, y), left = lat.face_at((long)x - 1, y);
                CHECK(((e.blue_face == right && e.red_face == left) ||
                       (e.blue_face == left && e.red_face == right)));
            }
        }
    }
}

TEST_CASE("faces list corners clockwise and edges by side") {
    SquareLattice lat(4);
    const LatticeFace& f = lat.face(lat.face_at(1, 2));
    CHECK(f.x == 1);
    CHECK(f.y == 2);
    CHECK(f.corners[0] == lat.vertex_at(1, 3));  // upper-left
    CHECK(f.corners[1] == lat.vertex_at(2, 3));  // upper-right
    CHECK(f.corners[2] == lat.vertex_at(2, 2));  // lower-right
    CHECK(f.corners[3] == lat.vertex_at(1, 2));  // lower-left
    CHECK(f.edges[0] == lat.h_edge_at(1, 2));    // bottom
    CHECK(f.edges[1] == lat.v_edge_at(2, 2));    // right
    CHECK(f.edges[2] == lat.h_edge_at(1, 3));    // top
    CHECK(f.edges[3] == lat.v_edge_at(1, 2));    // left
}

TEST_CASE("red face ordinals are row-major") {
    SquareLattice lat(4);
    // Red faces: odd x+y. Row 0: (1,0), (3,0); row 1: (0,1), (2,1); ...
    CHECK(lat.red_faces()[0] == lat.face_at(1, 0));
    CHECK(lat.red_faces()[1] == lat.face_at(3, 0));
    CHECK(lat.red_faces()[2] == lat.face_at(0, 1));
    CHECK(lat.red_face_ordinal(lat.face_at(1, 2)) == 4);
    CHECK(lat.red_face_row(lat.face_at(1, 2)) == 2);
    CHECK_THROWS(lat.red_face_ordinal(lat.face_at(0, 0)));
}

TEST_CASE("blue face qubits are row-major") {
    SquareLattice lat(4);
    CHECK(lat.face_qubit(lat.face_at(0, 0)) == 16);
    CHECK(lat.face_qubit(lat.face_at(2, 0)) == 17);
    CHECK(lat.face_qubit(lat.face_at(1, 1)) == 18);
    CHECK(lat.face_qubit(lat.face_at(3, 1)) == 19);
    CHECK(lat.face_qubit(lat.face_at(0, 2)) == 20);
    CHECK(lat.face_qubit(lat.face_at(2, 2)) == 21);
    CHECK(lat.face_qubit(lat.face_at(1, 3)) == 22);
    CHECK(lat.face_qubit(lat.face_at(3, 3)) == 23);
}

TEST_CASE("hopping classes partition the edges into vertex-disjoint sets") {
    for (std::size_t L : {2u, 4u, 8u}) {
        SquareLattice lat(L);
        std::set<uint32_t> seen;
        for (uint32_t c = 0; c < 4; ++c) {
            const auto& cls = lat.color_class(c);
            CHECK(cls.size() == L * L / 2);
            CHECK(std::is_sorted(cls.begin(), cls.end()));
            std::set<uint32_t> touched;
            for (uint32_t id : cls) {
                CHECK(!seen.count(id));
                seen.insert(id);
                const LatticeEdge& e = lat.edge(id);
                CHECK(e.color_class == c);
                CHECK(!touched.count(e.tail));
                CHECK(!touched.count(e.head));
                touched.insert(e.tail);
                touched.insert(e.head);
            }
        }
        CHECK(seen.size() == lat.num_edges());
        // Each red face contributes exactly one edge per class.
        for (uint32_t f : lat.red_faces()) {
            std::set<uint32_t> classes;
            for (uint32_t eid : lat.face(f).edges) {
                classes.insert(lat.edge(eid).color_class);
            }
            CHECK(classes.size() == 4);
        }
    }
}

TEST_CASE("snake order walks rows boustrophedon") {
    SquareLattice lat(4);
    std::vector<uint32_t> order = lat.snake_order();
    REQUIRE(order.size() == 16);
    std::vector<uint32_t> expect = {0, 1, 2, 3, 7, 6, 5, 4, 8, 9, 10, 11, 15, 14, 13, 12};
    CHECK(order == expect);
}

TEST_CASE("to_text dumps a readable table") {
    SquareLattice lat(2);
    std::string text = lat.to_text();
    CHECK(!text.empty());
    CHECK(text.find("edge") != std::string::npos);
}

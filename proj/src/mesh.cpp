#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "geometry.hpp"
#include "quadrature.hpp"
#include "reference_element.hpp"

namespace bsfem {

namespace {

double triangle_area2(Vec2 a, Vec2 b, Vec2 c) { return (b - a).cross(c - a); }

struct TriangleShape {
    double longest_edge;
    double min_angle_deg;
    double inradius;
};

TriangleShape triangle_shape(Vec2 a, Vec2 b, Vec2 c) {
    const double ab = (b - a).norm();
    const double bc = (c - b).norm();
    const double ca = (a - c).norm();
    const double area = 0.5 * std::abs(triangle_area2(a, b, c));
    TriangleShape s;
    s.longest_edge = std::max({ab, bc, ca});
    s.inradius = 2.0 * area / (ab + bc + ca);
    auto angle = [](Vec2 u, Vec2 v) {
        return std::acos(std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0));
    };
    const double aa = angle(b - a, c - a);
    const double ab_angle = angle(a - b, c - b);
    const double ac = M_PI - aa - ab_angle;
    s.min_angle_deg = std::min({aa, ab_angle, ac}) * 180.0 / M_PI;
    return s;
}

}  // namespace

Mesh::Mesh(int order, std::vector<Vec2> nodes, std::vector<int> element_nodes)
    : order_(order), nodes_(std::move(nodes)), element_nodes_(std::move(element_nodes)) {
    if (order_ != 1 && order_ != 2)
        throw Error(ErrorCode::InvalidArgument, "mesh order must be 1 or 2");
    if (element_nodes_.size() % static_cast<std::size_t>(nodes_per_element()) != 0)
        throw Error(ErrorCode::InvalidArgument, "element connectivity length mismatch");
    for (int id : element_nodes_) {
        if (id < 0 || id >= node_count())
            throw Error(ErrorCode::ParseError, "element references unknown node id");
    }
    boundary_faces_ = extract_boundary_faces(element_count(), element_nodes_, nodes_per_element());

    boundary_node_.assign(nodes_.size(), 0);
    const ReferenceElement ref(order_);
    for (const auto& face : boundary_faces_) {
        for (int local : ref.edge_nodes(face.local_edge))
            boundary_node_[static_cast<std::size_t>(element(face.element)[local])] = 1;
    }
    stats_ = mesh_size(*this);
}

int Mesh::boundary_node_count() const {
    return static_cast<int>(std::count(boundary_node_.begin(), boundary_node_.end(), 1));
}

std::vector<BoundaryFace> extract_boundary_faces(int element_count,
                                                 std::span<const int> element_nodes,
                                                 int nodes_per_element) {
    std::map<std::pair<int, int>, std::pair<int, BoundaryFace>> edge_use;
    for (int e = 0; e < element_count; ++e) {
        const int* elem = element_nodes.data() + static_cast<std::size_t>(e) * nodes_per_element;
        for (int le = 0; le < 3; ++le) {
            const auto [a, b] = ReferenceElement::edge_vertices(le);
            const std::pair<int, int> key{std::min(elem[a], elem[b]), std::max(elem[a], elem[b])};
            auto [it, inserted] = edge_use.try_emplace(key, 0, BoundaryFace{e, le});
            it->second.first += 1;
            if (it->second.first > 2)
                throw Error(ErrorCode::TopologyError, "edge shared by three or more elements");
        }
    }
    std::vector<BoundaryFace> faces;
    for (const auto& [key, use] : edge_use)
        if (use.first == 1) faces.push_back(use.second);
    // Deterministic order: by element, then local edge.
    std::sort(faces.begin(), faces.end(), [](const BoundaryFace& a, const BoundaryFace& b) {
        return a.element != b.element ? a.element < b.element : a.local_edge < b.local_edge;
    });
    return faces;
}

MeshStats mesh_size(const Mesh& mesh) {
    if (mesh.element_count() == 0)
        throw Error(ErrorCode::InvalidArgument, "mesh_size: empty mesh");
    MeshStats stats;
    stats.min_angle_deg = 180.0;
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto elem = mesh.element(e);
        const TriangleShape s =
            triangle_shape(mesh.node(elem[0]), mesh.node(elem[1]), mesh.node(elem[2]));
        stats.h = std::max(stats.h, s.longest_edge);
        stats.min_angle_deg = std::min(stats.min_angle_deg, s.min_angle_deg);
        if (s.inradius > 0.0)
            stats.regularity_ratio = std::max(stats.regularity_ratio, s.longest_edge / s.inradius);
        else
            stats.regularity_ratio = std::numeric_limits<double>::infinity();
    }
    return stats;
}

void validate_mesh(const Mesh& mesh) {
    const ReferenceElement ref(mesh.order());
    const QuadratureRule rule = QuadratureRule::triangle(5);
    const int nn = ref.node_count();
    std::vector<Vec2> grads(static_cast<std::size_t>(nn));

    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto elem = mesh.element(e);
        if (triangle_area2(mesh.node(elem[0]), mesh.node(elem[1]), mesh.node(elem[2])) <= 0.0)
            throw Error(ErrorCode::InvariantViolation, "orientation: element " + std::to_string(e) +
                                                           " is not counter-clockwise");
        for (const Vec2& p : rule.points) {
            ref.shape_gradients(p, grads.data());
            Mat2 jac{};
            for (int i = 0; i < nn; ++i) {
                const Vec2 a = mesh.node(elem[i]);
                jac.a00 += a.x * grads[i].x;
                jac.a01 += a.x * grads[i].y;
                jac.a10 += a.y * grads[i].x;
                jac.a11 += a.y * grads[i].y;
            }
            if (jac.det() <= 0.0)
                throw Error(ErrorCode::InvariantViolation,
                            "jacobian: non-positive determinant in element " + std::to_string(e));
        }
    }

    // Straight-skeleton Euler relation V - E + F = 1 for a disk-like mesh.
    std::vector<char> vertex_used(static_cast<std::size_t>(mesh.node_count()), 0);
    std::map<std::pair<int, int>, int> edges;
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto elem = mesh.element(e);
        for (int le = 0; le < 3; ++le) {
            const auto [a, b] = ReferenceElement::edge_vertices(le);
            vertex_used[static_cast<std::size_t>(elem[a])] = 1;
            edges[{std::min(elem[a], elem[b]), std::max(elem[a], elem[b])}] += 1;
        }
    }
    const long v = std::count(vertex_used.begin(), vertex_used.end(), 1);
    const long ec = static_cast<long>(edges.size());
    const long f = mesh.element_count();
    if (v - ec + f != 1)
        throw Error(ErrorCode::InvariantViolation, "euler: V - E + F != 1 for the straight skeleton");

    // The boundary must form a single closed cycle.
    const auto& faces = mesh.boundary_faces();
    if (faces.empty()) throw Error(ErrorCode::InvariantViolation, "topology: no boundary faces");
    std::map<int, std::vector<int>> vertex_to_face;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const auto elem = mesh.element(faces[i].element);
        const auto [a, b] = ReferenceElement::edge_vertices(faces[i].local_edge);
        vertex_to_face[elem[a]].push_back(static_cast<int>(i));
        vertex_to_face[elem[b]].push_back(static_cast<int>(i));
    }
    for (const auto& [vtx, incident] : vertex_to_face)
        if (incident.size() != 2)
            throw Error(ErrorCode::InvariantViolation,
                        "topology: boundary vertex not shared by exactly two faces");
    std::vector<char> visited(faces.size(), 0);
    std::size_t count = 0;
    int current = 0;
    int entry_vertex = -1;
    while (!visited[static_cast<std::size_t>(current)]) {
        visited[static_cast<std::size_t>(current)] = 1;
        ++count;
        const auto elem = mesh.element(faces[static_cast<std::size_t>(current)].element);
        const auto [a, b] =
            ReferenceElement::edge_vertices(faces[static_cast<std::size_t>(current)].local_edge);
        const int exit_vertex = (elem[a] == entry_vertex) ? elem[b] : elem[a];
        const auto& incident = vertex_to_face[exit_vertex];
        const int next = (incident[0] == current) ? incident[1] : incident[0];
        entry_vertex = exit_vertex;
        current = next;
    }
    if (count != faces.size())
        throw Error(ErrorCode::InvariantViolation,
                    "topology: boundary faces form more than one cycle");

    const MeshStats stats = mesh.stats();
    if (stats.regularity_ratio > 10.0)
        throw Error(ErrorCode::InvariantViolation, "regularity: h_T / rho_T exceeds 10");
}

Mesh generate_disk_mesh(int n_boundary, int order) {
    if (n_boundary < 8)
        throw Error(ErrorCode::InvalidArgument, "generate_disk_mesh: need n_boundary >= 8");
    if (order != 1 && order != 2)
        throw Error(ErrorCode::InvalidArgument, "generate_disk_mesh: order must be 1 or 2");

    const int rings = std::max(2, static_cast<int>(std::lround(n_boundary / 6.0)));

    // Center node plus concentric rings at radii j/rings; ring j carries
    // round(n_boundary * j / rings) equally spaced nodes starting at angle 0.
    std::vector<Vec2> nodes;
    nodes.push_back({0.0, 0.0});
    std::vector<int> ring_start(static_cast<std::size_t>(rings) + 1, 0);
    std::vector<int> ring_count(static_cast<std::size_t>(rings) + 1, 0);
    ring_count[0] = 1;
    for (int j = 1; j <= rings; ++j) {
        const int m = static_cast<int>(std::lround(static_cast<double>(n_boundary) * j / rings));
        const double r = static_cast<double>(j) / rings;
        ring_start[static_cast<std::size_t>(j)] = static_cast<int>(nodes.size());
        ring_count[static_cast<std::size_t>(j)] = m;
        for (int i = 0; i < m; ++i) {
            const double theta = 2.0 * M_PI * i / m;
            nodes.push_back({r * std::cos(theta), r * std::sin(theta)});
        }
    }

    std::vector<int> tri;
    auto emit = [&tri](int a, int b, int c) {
        tri.push_back(a);
        tri.push_back(b);
        tri.push_back(c);
    };

    // Innermost fan around the center.
    {
        const int m = ring_count[1];
        const int s = ring_start[1];
        for (int i = 0; i < m; ++i) emit(0, s + i, s + (i + 1) % m);
    }

    // Greedy angular advance between consecutive rings: at each step attach
    // the triangle whose new diagonal is shorter.
    for (int j = 2; j <= rings; ++j) {
        const int mi = ring_count[static_cast<std::size_t>(j) - 1];
        const int mo = ring_count[static_cast<std::size_t>(j)];
        const int si = ring_start[static_cast<std::size_t>(j) - 1];
        const int so = ring_start[static_cast<std::size_t>(j)];
        const double ri = static_cast<double>(j - 1) / rings;
        const double ro = static_cast<double>(j) / rings;
        auto inner = [&](int i) -> Vec2 {
            const double t = 2.0 * M_PI * i / mi;
            return {ri * std::cos(t), ri * std::sin(t)};
        };
        auto outer = [&](int o) -> Vec2 {
            const double t = 2.0 * M_PI * o / mo;
            return {ro * std::cos(t), ro * std::sin(t)};
        };
        int i = 0, o = 0;
        while (i < mi || o < mo) {
            const bool can_i = i < mi;
            const bool can_o = o < mo;
            bool advance_outer;
            if (!can_o)
                advance_outer = false;
            else if (!can_i)
                advance_outer = true;
            else
                advance_outer = (inner(i) - outer(o + 1)).norm() <= (inner(i + 1) - outer(o)).norm();
            if (advance_outer) {
                emit(si + i % mi, so + o % mo, so + (o + 1) % mo);
                ++o;
            } else {
                emit(si + i % mi, so + o % mo, si + (i + 1) % mi);
                ++i;
            }
        }
    }

    const DomainGeometry disk = DomainGeometry::unit_disk();

    if (order == 2) {
        // Insert one midnode per straight-skeleton edge; boundary midnodes are
        // projected onto the circle (H4 mapped nodes).
        const auto faces =
            extract_boundary_faces(static_cast<int>(tri.size() / 3), tri, 3);
        std::map<std::pair<int, int>, char> boundary_edge;
        for (const auto& face : faces) {
            const int* elem = tri.data() + static_cast<std::size_t>(face.element) * 3;
            const auto [a, b] = ReferenceElement::edge_vertices(face.local_edge);
            boundary_edge[{std::min(elem[a], elem[b]), std::max(elem[a], elem[b])}] = 1;
        }
        std::map<std::pair<int, int>, int> midnode;
        std::vector<int> tri6;
        const int ntri = static_cast<int>(tri.size() / 3);
        for (int e = 0; e < ntri; ++e) {
            const int* elem = tri.data() + static_cast<std::size_t>(e) * 3;
            int mids[3];
            for (int le = 0; le < 3; ++le) {
                const auto [a, b] = ReferenceElement::edge_vertices(le);
                const std::pair<int, int> key{std::min(elem[a], elem[b]),
                                              std::max(elem[a], elem[b])};
                auto it = midnode.find(key);
                if (it == midnode.end()) {
                    Vec2 mid = (nodes[static_cast<std::size_t>(elem[a])] +
                                nodes[static_cast<std::size_t>(elem[b])]) *
                               0.5;
                    if (boundary_edge.count(key)) mid = disk.closest_point(mid);
                    it = midnode.emplace(key, static_cast<int>(nodes.size())).first;
                    nodes.push_back(mid);
                }
                mids[le] = it->second;
            }
            for (int v = 0; v < 3; ++v) tri6.push_back(elem[v]);
            for (int le = 0; le < 3; ++le) tri6.push_back(mids[le]);
        }
        tri = std::move(tri6);
    }

    Mesh mesh(order, std::move(nodes), std::move(tri));

    const MeshStats stats = mesh.stats();
    if (stats.min_angle_deg < 20.0)
        throw Error(ErrorCode::MeshQualityFailure,
                    "generated triangle below the 20 degree minimum angle");
    try {
        validate_mesh(mesh);
    } catch (const Error& err) {
        throw Error(ErrorCode::MeshQualityFailure,
                    std::string("generated mesh fails validation: ") + err.what());
    }
    for (int id = 0; id < mesh.node_count(); ++id) {
        if (mesh.is_boundary_node(id) && std::abs(disk.level_set(mesh.node(id))) > 1e-10)
            throw Error(ErrorCode::MeshQualityFailure, "boundary node off the unit circle");
    }
    return mesh;
}

void write_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
    char buf[64];
    out << "order " << mesh.order() << "\n";
    out << "nodes " << mesh.node_count() << "\n";
    for (int i = 0; i < mesh.node_count(); ++i) {
        const Vec2 p = mesh.node(i);
        std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n", i, p.x, p.y);
        out << buf;
    }
    out << "elements " << mesh.element_count() << "\n";
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto elem = mesh.element(e);
        for (std::size_t i = 0; i < elem.size(); ++i) out << (i ? " " : "") << elem[i];
        out << "\n";
    }
    out << "boundary " << mesh.boundary_faces().size() << "\n";
    for (const auto& face : mesh.boundary_faces())
        out << face.element << " " << face.local_edge << "\n";
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

namespace {

struct LineReader {
    std::ifstream in;
    int line_no = 0;

    explicit LineReader(const std::string& path) : in(path) {}

    /// Next non-empty, non-comment line; false at EOF.
    bool next(std::string& line) {
        while (std::getline(in, line)) {
            ++line_no;
            const auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos || line[pos] == '#') continue;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& reason) const {
        throw Error(ErrorCode::ParseError,
                    "parse error at line " + std::to_string(line_no) + ": " + reason);
    }
};

}  // namespace

Mesh load_mesh(const std::string& path) {
    LineReader reader(path);
    if (!reader.in) throw Error(ErrorCode::IoError, "cannot open " + path);

    std::string line, keyword;

    if (!reader.next(line)) reader.fail("expected 'order <k>'");
    int order = 0;
    {
        std::istringstream ss(line);
        if (!(ss >> keyword >> order) || keyword != "order") reader.fail("expected 'order <k>'");
        if (order != 1 && order != 2) reader.fail("order must be 1 or 2");
    }

    if (!reader.next(line)) reader.fail("expected 'nodes <count>'");
    int node_count = 0;
    {
        std::istringstream ss(line);
        if (!(ss >> keyword >> node_count) || keyword != "nodes" || node_count <= 0)
            reader.fail("expected 'nodes <count>'");
    }
    std::vector<Vec2> nodes(static_cast<std::size_t>(node_count));
    std::vector<char> seen(static_cast<std::size_t>(node_count), 0);
    for (int i = 0; i < node_count; ++i) {
        if (!reader.next(line)) reader.fail("unexpected end of node list");
        std::istringstream ss(line);
        int id;
        double x, y;
        if (!(ss >> id >> x >> y)) reader.fail("expected 'id x y'");
        if (id < 0 || id >= node_count) reader.fail("node id out of range");
        if (seen[static_cast<std::size_t>(id)]) reader.fail("duplicate node id");
        seen[static_cast<std::size_t>(id)] = 1;
        nodes[static_cast<std::size_t>(id)] = {x, y};
    }

    if (!reader.next(line)) reader.fail("expected 'elements <count>'");
    int element_count = 0;
    {
        std::istringstream ss(line);
        if (!(ss >> keyword >> element_count) || keyword != "elements" || element_count <= 0)
            reader.fail("expected 'elements <count>'");
    }
    const int npe = order == 1 ? 3 : 6;
    std::vector<int> element_nodes;
    element_nodes.reserve(static_cast<std::size_t>(element_count) * npe);
    for (int e = 0; e < element_count; ++e) {
        if (!reader.next(line)) reader.fail("unexpected end of element list");
        std::istringstream ss(line);
        for (int i = 0; i < npe; ++i) {
            int id;
            if (!(ss >> id)) reader.fail("expected " + std::to_string(npe) + " node ids");
            if (id < 0 || id >= node_count) reader.fail("dangling node id in element");
            element_nodes.push_back(id);
        }
    }

    // Optional boundary section; recomputed from connectivity either way and
    // cross-checked when present.
    std::vector<BoundaryFace> declared;
    if (reader.next(line)) {
        std::istringstream ss(line);
        int count = 0;
        if (!(ss >> keyword >> count) || keyword != "boundary")
            reader.fail("expected 'boundary <count>'");
        for (int i = 0; i < count; ++i) {
            if (!reader.next(line)) reader.fail("unexpected end of boundary list");
            std::istringstream fs(line);
            BoundaryFace face;
            if (!(fs >> face.element >> face.local_edge)) reader.fail("expected 'element edge'");
            if (face.element < 0 || face.element >= element_count || face.local_edge < 0 ||
                face.local_edge > 2)
                reader.fail("boundary face out of range");
            declared.push_back(face);
        }
    }

    Mesh mesh(order, std::move(nodes), std::move(element_nodes));
    if (!declared.empty()) {
        auto computed = mesh.boundary_faces();
        std::sort(declared.begin(), declared.end(),
                  [](const BoundaryFace& a, const BoundaryFace& b) {
                      return a.element != b.element ? a.element < b.element
                                                    : a.local_edge < b.local_edge;
                  });
        if (declared != computed)
            throw Error(ErrorCode::InvariantViolation,
                        "topology: declared boundary faces disagree with connectivity");
    }
    validate_mesh(mesh);
    return mesh;
}

}  // namespace bsfem

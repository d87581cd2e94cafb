#include "drawgraph/trace.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <functional>
#include <numeric>

#include <nlohmann/json.hpp>

#include "drawgraph/errors.hpp"

namespace drawgraph {

namespace {

// Walk priority: clockwise starting at east (screen coordinates, y down).
constexpr std::array<int, 8> kWalkDx = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kWalkDy = {0, 1, 1, 1, 0, -1, -1, -1};

} // namespace

PixelKind kind_for_degree(int degree) {
    if (degree == 0) return PixelKind::Isolated;
    if (degree == 1) return PixelKind::End;
    if (degree == 2) return PixelKind::Passing;
    return PixelKind::Junction;
}

std::string to_string(PixelKind k) {
    switch (k) {
        case PixelKind::End: return "end";
        case PixelKind::Passing: return "passing";
        case PixelKind::Junction: return "junction";
        case PixelKind::Isolated: return "isolated";
    }
    return "?";
}

std::vector<std::vector<PixelKind>> classify_pixels(const BinaryRaster& skel) {
    std::vector<std::vector<PixelKind>> kinds(
        std::size_t(skel.height), std::vector<PixelKind>(std::size_t(skel.width), PixelKind::Isolated));
    for (int y = 0; y < skel.height; ++y) {
        for (int x = 0; x < skel.width; ++x) {
            if (!skel.at(x, y)) continue;
            int deg = 0;
            for (int i = 0; i < 8; ++i) deg += skel.ink_at(x + kWalkDx[i], y + kWalkDy[i]) ? 1 : 0;
            kinds[std::size_t(y)][std::size_t(x)] = kind_for_degree(deg);
        }
    }
    return kinds;
}

namespace {

struct Walker {
    const BinaryRaster& skel;
    const std::vector<std::vector<PixelKind>>& kinds;
    std::vector<std::uint8_t> visited; // non-junction pixels only

    bool is_visited(Px p) const { return visited[std::size_t(p.y) * skel.width + p.x] != 0; }
    void mark(Px p) { visited[std::size_t(p.y) * skel.width + p.x] = 1; }
    PixelKind kind(Px p) const { return kinds[std::size_t(p.y)][std::size_t(p.x)]; }

    std::vector<Px> ink_neighbors(Px p) const {
        std::vector<Px> out;
        for (int i = 0; i < 8; ++i) {
            Px q{p.x + kWalkDx[i], p.y + kWalkDy[i]};
            if (skel.ink_at(q.x, q.y)) out.push_back(q);
        }
        return out;
    }

    struct WalkResult {
        std::vector<Px> pixels; // starts with the seed
        bool cyclic = false;
    };

    // Walk from seed towards first, consuming Passing pixels, until an End or
    // Junction terminal or back to the seed (pure cycle).
    WalkResult walk(Px seed, Px first) {
        WalkResult res;
        res.pixels.push_back(seed);
        Px prev = seed;
        Px cur = first;
        while (true) {
            if (kind(cur) == PixelKind::Junction) {
                res.pixels.push_back(cur); // terminal only, stays unvisited
                return res;
            }
            res.pixels.push_back(cur);
            mark(cur);
            if (kind(cur) == PixelKind::End) return res;
            // Passing: exactly two ink neighbors, one of which is prev.
            Px next = cur;
            bool found = false;
            for (Px q : ink_neighbors(cur)) {
                if (q != prev) {
                    next = q;
                    found = true;
                    break;
                }
            }
            assert(found);
            (void)found;
            if (next == seed) {
                res.cyclic = true;
                return res;
            }
            prev = cur;
            cur = next;
        }
    }
};

} // namespace

std::vector<Trace> extract_traces(const BinaryRaster& skel) {
    auto kinds = classify_pixels(skel);
    Walker w{skel, kinds, std::vector<std::uint8_t>(skel.ink.size(), 0)};
    std::vector<Trace> traces;

    for (int y = 0; y < skel.height; ++y) {
        for (int x = 0; x < skel.width; ++x) {
            Px seed{x, y};
            if (!skel.at(x, y)) continue;
            PixelKind k = kinds[std::size_t(y)][std::size_t(x)];
            if (k == PixelKind::Junction || w.is_visited(seed)) continue;

            if (k == PixelKind::Isolated) {
                w.mark(seed);
                traces.push_back({{seed}, PixelKind::Isolated, PixelKind::Isolated, false});
                continue;
            }

            w.mark(seed);
            auto nbrs = w.ink_neighbors(seed);
            auto forward = w.walk(seed, nbrs.front());

            Trace t;
            if (forward.cyclic) {
                t.pixels = forward.pixels;
                t.cyclic = true;
                t.start_kind = PixelKind::Passing;
                t.end_kind = PixelKind::Passing;
            } else {
                // Reverse the first walk, then continue out the other side.
                t.pixels.assign(forward.pixels.rbegin(), forward.pixels.rend());
                if (k == PixelKind::Passing) {
                    Px other = seed;
                    for (Px q : nbrs) {
                        if (q != forward.pixels[1]) {
                            other = q;
                            break;
                        }
                    }
                    if (other != seed) {
                        auto backward = w.walk(seed, other);
                        t.pixels.insert(t.pixels.end(), backward.pixels.begin() + 1,
                                        backward.pixels.end());
                    }
                }
                t.start_kind = w.kind(t.pixels.front());
                t.end_kind = w.kind(t.pixels.back());
            }
            traces.push_back(std::move(t));
        }
    }
    return traces;
}

namespace {

// Angle at p subtended by the trace terminals s and e.
double terminal_angle(Px s, Px e, Px p) {
    Vec2 a = s.to_vec() - p.to_vec();
    Vec2 b = e.to_vec() - p.to_vec();
    double na = norm(a), nb = norm(b);
    if (na < 1e-12 || nb < 1e-12) return 0.0;
    double c = dot(a, b) / (na * nb);
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c);
}

} // namespace

std::vector<int> corner_indices(const Trace& t, double spike_threshold) {
    const auto& p = t.pixels;
    const int m = int(p.size());
    if (t.cyclic || m < 5) return {};

    // theta_i defined for interior indices 1..m-2.
    std::vector<double> theta(std::size_t(m), 0.0);
    for (int i = 1; i <= m - 2; ++i) theta[std::size_t(i)] = terminal_angle(p.front(), p.back(), p[std::size_t(i)]);

    // Second difference needs theta at i-1, i, i+1, all interior: 2..m-3.
    auto dd = [&](int i) {
        return theta[std::size_t(i + 1)] - 2.0 * theta[std::size_t(i)] + theta[std::size_t(i - 1)];
    };

    // Candidate corners stay >= 3 px from both terminals: the terminal
    // vectors are too short there for theta to be meaningful, and closer
    // splits would only produce sub-prune-size fragments.
    const int lo = 3, hi = m - 4;
    std::vector<int> corners;
    for (int i = lo; i <= hi; ++i) {
        double v = dd(i);
        if (v <= spike_threshold) continue;
        if (v > dd(i - 1) && v > dd(i + 1)) corners.push_back(i);
    }
    return corners;
}

std::vector<Trace> split_at_corners(const Trace& t, double spike_threshold) {
    std::vector<int> corners = corner_indices(t, spike_threshold);
    if (corners.empty()) return {t};

    std::vector<Trace> parts;
    int begin = 0;
    auto emit = [&](int from, int to) {
        Trace part;
        part.pixels.assign(t.pixels.begin() + from, t.pixels.begin() + to + 1);
        part.cyclic = false;
        part.start_kind = (from == 0) ? t.start_kind : PixelKind::Passing;
        part.end_kind = (to == t.length() - 1) ? t.end_kind : PixelKind::Passing;
        parts.push_back(std::move(part));
    };
    for (int c : corners) {
        emit(begin, c);
        begin = c; // sub-traces share the split pixel
    }
    emit(begin, t.length() - 1);
    return parts;
}

PrunedTraces prune_and_merge(const std::vector<Trace>& traces, double merge_radius) {
    PrunedTraces out;
    for (const Trace& t : traces)
        if (t.length() >= 4) out.traces.push_back(t);

    struct Terminal {
        int trace;
        int end;
        Vec2 pos;
    };
    std::vector<Terminal> terminals;
    for (int i = 0; i < int(out.traces.size()); ++i) {
        const Trace& t = out.traces[std::size_t(i)];
        if (t.cyclic) continue;
        terminals.push_back({i, 0, t.start().to_vec()});
        terminals.push_back({i, 1, t.end().to_vec()});
    }

    // Union-find over terminals; transitive closure of the radius relation.
    std::vector<int> parent(terminals.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[std::size_t(a)] != a) {
            parent[std::size_t(a)] = parent[std::size_t(parent[std::size_t(a)])];
            a = parent[std::size_t(a)];
        }
        return a;
    };
    for (std::size_t i = 0; i < terminals.size(); ++i)
        for (std::size_t j = i + 1; j < terminals.size(); ++j)
            if (dist(terminals[i].pos, terminals[j].pos) <= merge_radius) {
                int a = find(int(i)), b = find(int(j));
                if (a != b) parent[std::size_t(std::max(a, b))] = std::min(a, b);
            }

    // Vertices emitted in order of first member terminal.
    std::vector<int> vertex_of_root(terminals.size(), -1);
    out.trace_vertices.assign(out.traces.size(), {-1, -1});
    for (std::size_t i = 0; i < terminals.size(); ++i) {
        int root = find(int(i));
        int v = vertex_of_root[std::size_t(root)];
        if (v < 0) {
            v = int(out.vertices.vertices.size());
            vertex_of_root[std::size_t(root)] = v;
            out.vertices.vertices.push_back({});
        }
        Vertex& vx = out.vertices.vertices[std::size_t(v)];
        vx.ends.push_back({terminals[i].trace, terminals[i].end});
        auto& pair = out.trace_vertices[std::size_t(terminals[i].trace)];
        (terminals[i].end == 0 ? pair.first : pair.second) = v;
    }
    for (Vertex& v : out.vertices.vertices) {
        Vec2 c{0, 0};
        for (const TraceEnd& e : v.ends) {
            const Trace& t = out.traces[std::size_t(e.trace)];
            c = c + (e.end == 0 ? t.start() : t.end()).to_vec();
        }
        v.position = c / double(v.ends.size());
    }

    // Each cyclic trace owns a vertex at its seed pixel, with no ends.
    for (int i = 0; i < int(out.traces.size()); ++i) {
        const Trace& t = out.traces[std::size_t(i)];
        if (!t.cyclic) continue;
        int v = int(out.vertices.vertices.size());
        out.vertices.vertices.push_back({t.start().to_vec(), {}});
        out.trace_vertices[std::size_t(i)] = {v, v};
    }
    return out;
}

std::string traces_to_json(const std::vector<Trace>& traces) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Trace& t : traces) {
        nlohmann::json pix = nlohmann::json::array();
        for (Px p : t.pixels) pix.push_back({p.x, p.y});
        arr.push_back({{"pixels", pix},
                       {"start_kind", to_string(t.start_kind)},
                       {"end_kind", to_string(t.end_kind)},
                       {"cyclic", t.cyclic}});
    }
    return arr.dump(2);
}

} // namespace drawgraph

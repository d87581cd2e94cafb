#include "drawgraph/skeleton.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "drawgraph/errors.hpp"

namespace drawgraph {

namespace {

// Ring neighborhood in the order N, NE, E, SE, S, SW, W, NW. Consecutive
// entries are mutually 8-adjacent, so counting 0->1 transitions around the
// ring counts the 8-connected ink clusters touching the center.
constexpr std::array<int, 8> kRingDx = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr std::array<int, 8> kRingDy = {-1, -1, 0, 1, 1, 1, 0, -1};

struct Ring {
    std::array<bool, 8> v;
    int ink_count() const {
        int n = 0;
        for (bool b : v) n += b;
        return n;
    }
    // Number of 0->1 transitions in circular order (cluster count).
    int transitions() const {
        int n = 0;
        for (int i = 0; i < 8; ++i)
            if (!v[i] && v[(i + 1) % 8]) ++n;
        return n;
    }
};

Ring ring_at(const BinaryRaster& m, int x, int y) {
    Ring r{};
    for (int i = 0; i < 8; ++i) r.v[i] = m.ink_at(x + kRingDx[i], y + kRingDy[i]);
    return r;
}

// One Zhang-Suen subiteration; deletions are decided on the input state and
// applied simultaneously. Returns true when anything was deleted.
bool zhang_suen_pass(BinaryRaster& m, int phase) {
    std::vector<Px> doomed;
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (!m.at(x, y)) continue;
            Ring r = ring_at(m, x, y);
            int b = r.ink_count();
            if (b < 2 || b > 6) continue;
            if (r.transitions() != 1) continue;
            bool p2 = r.v[0], p4 = r.v[2], p6 = r.v[4], p8 = r.v[6];
            if (phase == 0) {
                if ((p2 && p4 && p6) || (p4 && p6 && p8)) continue;
            } else {
                if ((p2 && p4 && p8) || (p2 && p6 && p8)) continue;
            }
            doomed.push_back({x, y});
        }
    }
    for (Px p : doomed) m.set(p.x, p.y, false);
    return !doomed.empty();
}

// Deleting p is safe when its ink neighbors stay mutually 8-connected
// without it. The ring test alone is too conservative near stroke
// crossings, so reconnection is searched within a bounded window.
bool deletion_is_safe(BinaryRaster& m, Px p, int radius = 12) {
    std::vector<Px> nbrs;
    for (int i = 0; i < 8; ++i) {
        Px q{p.x + kRingDx[i], p.y + kRingDy[i]};
        if (m.ink_at(q.x, q.y)) nbrs.push_back(q);
    }
    if (nbrs.size() < 2) return false; // endpoint or isolated
    Ring r = ring_at(m, p.x, p.y);
    if (r.transitions() == 1) return true;

    m.set(p.x, p.y, false);
    std::vector<Px> stack = {nbrs.front()};
    std::vector<Px> seen = {nbrs.front()};
    std::size_t found = 1;
    while (!stack.empty() && found < nbrs.size()) {
        Px cur = stack.back();
        stack.pop_back();
        for (int i = 0; i < 8; ++i) {
            Px q{cur.x + kRingDx[i], cur.y + kRingDy[i]};
            if (!m.ink_at(q.x, q.y)) continue;
            if (std::abs(q.x - p.x) > radius || std::abs(q.y - p.y) > radius) continue;
            if (std::find(seen.begin(), seen.end(), q) != seen.end()) continue;
            seen.push_back(q);
            stack.push_back(q);
            for (std::size_t k = 1; k < nbrs.size(); ++k)
                if (q == nbrs[k]) ++found;
        }
    }
    m.set(p.x, p.y, true);
    return found == nbrs.size();
}

// Break residual 2x2 all-ink blocks by deleting one safe pixel per block.
bool collapse_square_blocks(BinaryRaster& m) {
    bool changed = false;
    for (int y = 0; y + 1 < m.height; ++y) {
        for (int x = 0; x + 1 < m.width; ++x) {
            while (m.at(x, y) && m.at(x + 1, y) && m.at(x, y + 1) && m.at(x + 1, y + 1)) {
                const std::array<Px, 4> cand = {Px{x + 1, y + 1}, Px{x + 1, y}, Px{x, y + 1},
                                                Px{x, y}};
                bool deleted = false;
                for (Px p : cand) {
                    if (deletion_is_safe(m, p)) {
                        m.set(p.x, p.y, false);
                        changed = true;
                        deleted = true;
                        break;
                    }
                }
                if (deleted) continue;
                // No pixel is deletable: every corner pins a diagonal arm.
                // Slide one corner onto a free orthogonal cell instead; the
                // arm reattaches through the slid pixel.
                bool moved = false;
                for (Px p : cand) {
                    Px diag{p.x == x ? x - 1 : x + 2, p.y == y ? y - 1 : y + 2};
                    if (!m.ink_at(diag.x, diag.y)) continue;
                    for (Px q : {Px{p.x, diag.y}, Px{diag.x, p.y}}) {
                        if (m.ink_at(q.x, q.y) || !m.in_bounds(q.x, q.y)) continue;
                        m.set(q.x, q.y, true);
                        if (deletion_is_safe(m, p)) {
                            m.set(p.x, p.y, false);
                            moved = true;
                            break;
                        }
                        m.set(q.x, q.y, false);
                    }
                    if (moved) break;
                }
                changed = changed || moved;
                if (!moved) break;
            }
        }
    }
    return changed;
}

BinaryRaster zhang_suen(const BinaryRaster& mask) {
    // Remember the input components so any that thinning erases entirely can
    // be restored as single pixels (keeps the component count contract).
    std::vector<int> in_labels;
    int n_components = label_components8(mask, in_labels);

    BinaryRaster m = mask;
    bool changed = true;
    for (int rounds = 0; changed && rounds < 64; ++rounds) {
        changed = false;
        bool thinning = true;
        while (thinning) {
            bool a = zhang_suen_pass(m, 0);
            bool b = zhang_suen_pass(m, 1);
            thinning = a || b;
            changed = changed || thinning;
        }
        changed = collapse_square_blocks(m) || changed;
    }

    if (n_components > 0) {
        std::vector<char> alive(std::size_t(n_components) + 1, 0);
        for (int y = 0; y < m.height; ++y)
            for (int x = 0; x < m.width; ++x)
                if (m.at(x, y)) alive[in_labels[std::size_t(y) * m.width + x]] = 1;

        // Restore a vanished component as the pixel nearest its centroid.
        std::vector<double> cx(std::size_t(n_components) + 1, 0.0);
        std::vector<double> cy(std::size_t(n_components) + 1, 0.0);
        std::vector<long> cnt(std::size_t(n_components) + 1, 0);
        bool any_dead = false;
        for (int c = 1; c <= n_components; ++c) any_dead = any_dead || !alive[c];
        if (any_dead) {
            for (int y = 0; y < mask.height; ++y)
                for (int x = 0; x < mask.width; ++x)
                    if (mask.at(x, y)) {
                        int c = in_labels[std::size_t(y) * mask.width + x];
                        cx[c] += x;
                        cy[c] += y;
                        cnt[c] += 1;
                    }
            std::vector<Px> best(std::size_t(n_components) + 1, Px{-1, -1});
            std::vector<double> best_d(std::size_t(n_components) + 1, 0.0);
            for (int y = 0; y < mask.height; ++y)
                for (int x = 0; x < mask.width; ++x)
                    if (mask.at(x, y)) {
                        int c = in_labels[std::size_t(y) * mask.width + x];
                        if (alive[c]) continue;
                        double dx = x - cx[c] / double(cnt[c]);
                        double dy = y - cy[c] / double(cnt[c]);
                        double d = dx * dx + dy * dy;
                        if (best[c].x < 0 || d < best_d[c]) {
                            best[c] = {x, y};
                            best_d[c] = d;
                        }
                    }
            for (int c = 1; c <= n_components; ++c)
                if (!alive[c] && best[c].x >= 0) m.set(best[c].x, best[c].y, true);
        }
    }
    return m;
}

} // namespace

BinaryRaster skeletonize(const BinaryRaster& mask, const std::string& method) {
    if (method != "zhang-suen") throw DataError("unknown thinning method: " + method);
    return zhang_suen(mask);
}

BinaryRaster remove_spurs(const BinaryRaster& skel, int max_spur_len) {
    if (max_spur_len <= 0) return skel;
    BinaryRaster m = skel;

    auto degree = [&](Px p) { return ring_at(m, p.x, p.y).ink_count(); };
    // Delete the attachment pixel too when its remaining neighborhood stays
    // one 8-connected cluster (a stub base), otherwise it must survive to
    // keep the main structure connected (a real junction).
    auto delete_if_simple = [&](Px p) {
        Ring r = ring_at(m, p.x, p.y);
        if (r.ink_count() >= 1 && r.transitions() == 1) m.set(p.x, p.y, false);
    };

    // Endpoints of the input state, processed in row-major order. Each walk
    // runs against the current mask so cascading deletions stay consistent.
    std::vector<Px> endpoints;
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            if (m.at(x, y) && degree({x, y}) == 1) endpoints.push_back({x, y});

    for (Px e : endpoints) {
        if (!m.at(e.x, e.y) || degree(e) != 1) continue;
        std::vector<Px> branch = {e};
        while (int(branch.size()) <= max_spur_len) {
            Px cur = branch.back();
            std::vector<Px> next;
            for (int i = 0; i < 8; ++i) {
                Px q{cur.x + kRingDx[i], cur.y + kRingDy[i]};
                if (!m.ink_at(q.x, q.y)) continue;
                if (std::find(branch.begin(), branch.end(), q) == branch.end())
                    next.push_back(q);
            }
            if (next.empty()) break; // isolated segment, not a spur
            if (next.size() >= 2) {
                // cur already touches the main structure; it is the attachment.
                branch.pop_back();
                for (Px p : branch) m.set(p.x, p.y, false);
                delete_if_simple(cur);
                break;
            }
            if (degree(next[0]) >= 3) {
                // The single continuation is a junction proper.
                for (Px p : branch) m.set(p.x, p.y, false);
                delete_if_simple(next[0]);
                break;
            }
            branch.push_back(next[0]);
        }
    }
    return m;
}

} // namespace drawgraph

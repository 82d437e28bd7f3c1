#include "drawpath/trace.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <fstream>
#include <stdexcept>

namespace drawpath {

namespace {

// 8-neighborhood in circular order: N, NE, E, SE, S, SW, W, NW.
constexpr std::array<std::pair<int, int>, 8> kRing = {{
    {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1},
}};

bool ink_at(const BinaryImage& img, int x, int y) {
    return img.in_bounds(x, y) && img.at(x, y);
}

std::vector<PixelCoord> ink_neighbors(const BinaryImage& img, PixelCoord p) {
    std::vector<PixelCoord> out;
    for (auto [dx, dy] : kRing)
        if (ink_at(img, p.x + dx, p.y + dy)) out.push_back({p.x + dx, p.y + dy});
    return out;
}

// Golay "L" structuring elements for sequential thinning.
// '1' = ink required, '0' = blank required, '.' = don't care.
struct Element {
    std::array<char, 9> cells; // row-major 3x3, centered
};

Element rotate90(const Element& e) {
    Element r{};
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) r.cells[y * 3 + x] = e.cells[(2 - x) * 3 + y];
    return r;
}

std::vector<Element> thinning_elements() {
    Element a{{'0', '0', '0',
               '.', '1', '.',
               '1', '1', '1'}};
    Element b{{'.', '0', '0',
               '1', '1', '0',
               '.', '1', '.'}};
    std::vector<Element> out;
    Element ra = a, rb = b;
    for (int i = 0; i < 4; ++i) {
        out.push_back(ra);
        out.push_back(rb);
        ra = rotate90(ra);
        rb = rotate90(rb);
    }
    return out;
}

// Yokoi connectivity number for 8-connected ink. A pixel is a simple point
// (its deletion preserves connectivity and holes) exactly when this is 1.
int yokoi_number(const BinaryImage& img, int x, int y) {
    int bar[8];
    for (int k = 0; k < 8; ++k)
        bar[k] = ink_at(img, x + kRing[k].first, y + kRing[k].second) ? 0 : 1;
    int c = 0;
    for (int k = 0; k < 8; k += 2)
        c += bar[k] - bar[k] * bar[(k + 1) % 8] * bar[(k + 2) % 8];
    return c;
}

bool matches(const BinaryImage& img, int x, int y, const Element& e) {
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            char c = e.cells[(dy + 1) * 3 + (dx + 1)];
            if (c == '.') continue;
            bool ink = ink_at(img, x + dx, y + dy);
            if (c == '1' && !ink) return false;
            if (c == '0' && ink) return false;
        }
    }
    return true;
}

} // namespace

void TraceParams::validate() const {
    if (min_component_px < 0 || max_spur_px < 0 || max_extension_px < 0)
        throw std::invalid_argument("TraceParams: all fields must be >= 0");
}

int crossing_number(const BinaryImage& img, int x, int y) {
    int count = 0;
    bool prev = ink_at(img, x + kRing[7].first, y + kRing[7].second);
    for (auto [dx, dy] : kRing) {
        bool cur = ink_at(img, x + dx, y + dy);
        if (!prev && cur) ++count;
        prev = cur;
    }
    return count;
}

BinaryImage clean(const BinaryImage& img, const TraceParams& params) {
    params.validate();
    BinaryImage out = img;
    std::vector<uint8_t> seen(img.ink.size(), 0);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            size_t i = static_cast<size_t>(y) * img.width + x;
            if (!img.ink[i] || seen[i]) continue;
            // Flood fill one 8-connected component.
            std::vector<PixelCoord> comp;
            std::deque<PixelCoord> queue{{x, y}};
            seen[i] = 1;
            while (!queue.empty()) {
                PixelCoord p = queue.front();
                queue.pop_front();
                comp.push_back(p);
                for (auto [dx, dy] : kRing) {
                    int nx = p.x + dx, ny = p.y + dy;
                    if (!ink_at(img, nx, ny)) continue;
                    size_t j = static_cast<size_t>(ny) * img.width + nx;
                    if (!seen[j]) {
                        seen[j] = 1;
                        queue.push_back({nx, ny});
                    }
                }
            }
            if (static_cast<int>(comp.size()) < params.min_component_px)
                for (PixelCoord p : comp) out.set(p.x, p.y, false);
        }
    }
    return out;
}

namespace {

void thin_to_fixpoint(BinaryImage& out) {
    static const std::vector<Element> elements = thinning_elements();
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Element& e : elements) {
            std::vector<PixelCoord> hits;
            for (int y = 0; y < out.height; ++y)
                for (int x = 0; x < out.width; ++x)
                    if (out.at(x, y) && matches(out, x, y, e)) hits.push_back({x, y});
            for (PixelCoord p : hits) out.set(p.x, p.y, false);
            if (!hits.empty()) changed = true;
        }
    }
}

// The pattern passes can reach a fixpoint where some pixel still has all four
// axis neighbors inked. Resolve it by deleting a nearby simple point (never an
// endpoint), which is guaranteed not to change connectivity or holes.
bool remove_fat_pixels(BinaryImage& out) {
    bool removed = false;
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            if (!out.at(x, y) || !ink_at(out, x - 1, y) || !ink_at(out, x + 1, y) ||
                !ink_at(out, x, y - 1) || !ink_at(out, x, y + 1))
                continue;
            std::array<PixelCoord, 9> candidates;
            candidates[0] = {x, y};
            for (int k = 0; k < 8; ++k)
                candidates[k + 1] = {x + kRing[k].first, y + kRing[k].second};
            for (PixelCoord c : candidates) {
                if (!ink_at(out, c.x, c.y)) continue;
                if (ink_neighbors(out, c).size() < 2) continue;
                if (yokoi_number(out, c.x, c.y) != 1) continue;
                out.set(c.x, c.y, false);
                removed = true;
                break;
            }
        }
    }
    return removed;
}

bool is_fat(const BinaryImage& img, int x, int y) {
    return img.at(x, y) && ink_at(img, x - 1, y) && ink_at(img, x + 1, y) &&
           ink_at(img, x, y - 1) && ink_at(img, x, y + 1);
}

// A genuine 4-way crossing cannot be thinned by deletion alone: its center is
// a cut vertex and each arm's inner pixel is too. When the original image has
// ink on a diagonal flanking one arm, reroute that arm through the restored
// diagonal instead: delete the arm's inner pixel and set the diagonal. The
// result stays inside the original ink, and every connection survives because
// all remaining neighbors of the deleted pixel touch the restored diagonal.
std::set<PixelCoord> component_of(const BinaryImage& img, PixelCoord start) {
    std::set<PixelCoord> comp{start};
    std::deque<PixelCoord> queue{start};
    while (!queue.empty()) {
        PixelCoord q = queue.front();
        queue.pop_front();
        for (PixelCoord m : ink_neighbors(img, q))
            if (comp.insert(m).second) queue.push_back(m);
    }
    return comp;
}

bool try_reroute(PixelCoord p, BinaryImage& out, const BinaryImage& original) {
    const std::set<PixelCoord> comp = component_of(out, p);
    constexpr int axes[4][2] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
    for (auto [ax, ay] : axes) {
        PixelCoord n{p.x + ax, p.y + ay};
        for (int side : {1, -1}) {
            PixelCoord d{n.x - ay * side, n.y + ax * side};
            if (ink_at(out, d.x, d.y) || !ink_at(original, d.x, d.y)) continue;

            // d may only attach to the crossing's own component.
            bool merges = false;
            for (PixelCoord q : ink_neighbors(out, d))
                if (!comp.count(q)) merges = true;
            if (merges) continue;

            out.set(n.x, n.y, false);
            out.set(d.x, d.y, true);
            // Exact connectivity check: the component keeps its size
            // (it traded n for d and lost nothing).
            bool ok = component_of(out, p).size() == comp.size();
            // The swap must also strictly reduce fatness; every affected
            // pixel lies within two steps of p.
            for (int yy = p.y - 2; yy <= p.y + 2 && ok; ++yy)
                for (int xx = p.x - 2; xx <= p.x + 2; ++xx)
                    if (out.in_bounds(xx, yy) && is_fat(out, xx, yy)) ok = false;
            if (!ok) {
                out.set(n.x, n.y, true);
                out.set(d.x, d.y, false);
                continue;
            }
            return true;
        }
    }
    return false;
}

void restructure_crossings(BinaryImage& out, const BinaryImage& original) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int y = 0; y < out.height; ++y)
            for (int x = 0; x < out.width; ++x)
                if (is_fat(out, x, y) && try_reroute({x, y}, out, original)) changed = true;
    }
}

} // namespace

BinaryImage skeletonize(const BinaryImage& img) {
    BinaryImage out = img;
    for (;;) {
        thin_to_fixpoint(out);
        if (!remove_fat_pixels(out)) break;
    }
    restructure_crossings(out, img);
    return out;
}

BinaryImage prune(const BinaryImage& skel, const TraceParams& params) {
    params.validate();
    BinaryImage out = skel;
    if (params.max_spur_px == 0) return out;
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<PixelCoord> endpoints;
        for (int y = 0; y < out.height; ++y)
            for (int x = 0; x < out.width; ++x)
                if (out.at(x, y) && crossing_number(out, x, y) == 1)
                    endpoints.push_back({x, y});
        for (PixelCoord e : endpoints) {
            if (!out.at(e.x, e.y)) continue; // removed by an earlier spur
            std::vector<PixelCoord> path{e};
            bool junction_found = false;
            for (;;) {
                if (static_cast<int>(path.size()) >= params.max_spur_px) break;
                PixelCoord cur = path.back();
                std::vector<PixelCoord> next;
                for (PixelCoord n : ink_neighbors(out, cur))
                    if (std::find(path.begin(), path.end(), n) == path.end()) next.push_back(n);
                if (next.empty()) break; // open component, not a spur
                bool at_junction = false;
                for (PixelCoord n : next)
                    if (crossing_number(out, n.x, n.y) >= 3) at_junction = true;
                if (at_junction) {
                    junction_found = true;
                    break;
                }
                if (next.size() > 1) break; // irregular configuration, keep
                path.push_back(next[0]);
            }
            if (junction_found && static_cast<int>(path.size()) < params.max_spur_px) {
                for (PixelCoord p : path) out.set(p.x, p.y, false);
                changed = true;
            }
        }
    }
    return out;
}

BinaryImage extend_line_ends(const BinaryImage& skel, const TraceParams& params) {
    params.validate();
    BinaryImage out = skel;
    if (params.max_extension_px == 0) return out;
    std::vector<PixelCoord> endpoints;
    for (int y = 0; y < skel.height; ++y)
        for (int x = 0; x < skel.width; ++x)
            if (skel.at(x, y) && crossing_number(skel, x, y) == 1) endpoints.push_back({x, y});

    for (PixelCoord e : endpoints) {
        // Local direction: from the 3rd-to-last branch point to the endpoint.
        std::vector<PixelCoord> back{e};
        for (int step = 0; step < 2; ++step) {
            PixelCoord cur = back.back();
            PixelCoord next{-1, -1};
            bool found = false;
            for (PixelCoord n : ink_neighbors(skel, cur)) {
                if (std::find(back.begin(), back.end(), n) == back.end()) {
                    next = n;
                    found = true;
                    break;
                }
            }
            if (!found) break;
            back.push_back(next);
        }
        if (back.size() < 2) continue; // isolated pixel, no direction
        PixelCoord anchor = back.back();
        double dx = e.x - anchor.x, dy = e.y - anchor.y;
        double norm = std::hypot(dx, dy);
        if (norm < 1e-12) continue;
        dx /= norm;
        dy /= norm;

        double px = e.x, py = e.y;
        PixelCoord last = e;
        int placed = 0;
        while (placed < params.max_extension_px) {
            px += dx;
            py += dy;
            PixelCoord c{static_cast<int>(std::lround(px)), static_cast<int>(std::lround(py))};
            if (!out.in_bounds(c.x, c.y)) break;
            if (c == last) continue;
            if (out.at(c.x, c.y)) break; // gap closed
            out.set(c.x, c.y, true);
            last = c;
            ++placed;
        }
    }
    return out;
}

std::set<PixelCoord> detect_junctions(const BinaryImage& skel) {
    std::set<PixelCoord> out;
    for (int y = 0; y < skel.height; ++y)
        for (int x = 0; x < skel.width; ++x)
            if (skel.at(x, y) && crossing_number(skel, x, y) >= 3) out.insert({x, y});
    return out;
}

namespace {

// Nearest junction 8-adjacent to p: axis contact beats diagonal, then (y,x).
bool adjacent_junction(const std::set<PixelCoord>& junctions, PixelCoord p, PixelCoord& out) {
    bool found = false;
    int best_d2 = 3;
    for (auto [dx, dy] : kRing) {
        PixelCoord c{p.x + dx, p.y + dy};
        if (!junctions.count(c)) continue;
        int d2 = dx * dx + dy * dy;
        PixelCoord cur = c;
        if (!found || d2 < best_d2 ||
            (d2 == best_d2 && std::tie(cur.y, cur.x) < std::tie(out.y, out.x))) {
            out = c;
            best_d2 = d2;
            found = true;
        }
    }
    return found;
}

bool coord_less_yx(PixelCoord a, PixelCoord b) {
    return std::tie(a.y, a.x) < std::tie(b.y, b.x);
}

} // namespace

std::vector<LineSegment> split_and_trace(const BinaryImage& skel) {
    std::set<PixelCoord> junctions = detect_junctions(skel);

    // Arcs live in the skeleton minus its junction pixels.
    BinaryImage work = skel;
    for (PixelCoord j : junctions) work.set(j.x, j.y, false);

    std::vector<std::vector<PixelCoord>> paths;
    std::vector<uint8_t> visited(work.ink.size(), 0);
    auto is_visited = [&](PixelCoord p) {
        return visited[static_cast<size_t>(p.y) * work.width + p.x] != 0;
    };
    auto mark = [&](PixelCoord p) {
        visited[static_cast<size_t>(p.y) * work.width + p.x] = 1;
    };
    // Arc adjacency: drop a diagonal edge whenever an ink pixel of the full
    // skeleton (junctions included) touches both of its ends on an axis. The
    // arc routes through that pixel instead, and diagonal shortcuts across a
    // removed junction no longer glue distinct arms together.
    auto reduced_neighbors = [&](PixelCoord p) {
        std::vector<PixelCoord> out;
        for (PixelCoord n : ink_neighbors(work, p)) {
            if (n.x != p.x && n.y != p.y &&
                (ink_at(skel, p.x, n.y) || ink_at(skel, n.x, p.y)))
                continue;
            out.push_back(n);
        }
        return out;
    };
    auto unvisited_neighbors = [&](PixelCoord p) {
        std::vector<PixelCoord> out;
        for (PixelCoord n : reduced_neighbors(p))
            if (!is_visited(n)) out.push_back(n);
        return out;
    };

    for (int y0 = 0; y0 < work.height; ++y0) {
        for (int x0 = 0; x0 < work.width; ++x0) {
            if (!work.at(x0, y0) || is_visited({x0, y0})) continue;
            // Collect the whole component, then peel paths from its ends.
            std::vector<PixelCoord> comp;
            std::deque<PixelCoord> queue{{x0, y0}};
            std::set<PixelCoord> in_comp{{x0, y0}};
            while (!queue.empty()) {
                PixelCoord p = queue.front();
                queue.pop_front();
                comp.push_back(p);
                for (PixelCoord n : reduced_neighbors(p))
                    if (in_comp.insert(n).second) queue.push_back(n);
            }
            std::sort(comp.begin(), comp.end(), coord_less_yx);

            size_t remaining = comp.size();
            while (remaining > 0) {
                // Start at an unvisited pixel with the fewest unvisited
                // neighbors (an endpoint on an open arc, the lowest (y,x)
                // pixel on a closed loop).
                PixelCoord start{-1, -1};
                size_t best = 9;
                for (PixelCoord p : comp) {
                    if (is_visited(p)) continue;
                    size_t n = unvisited_neighbors(p).size();
                    if (n < best) {
                        best = n;
                        start = p;
                    }
                }
                std::vector<PixelCoord> path{start};
                mark(start);
                --remaining;
                PixelCoord cur = start;
                for (;;) {
                    auto next = unvisited_neighbors(cur);
                    if (next.empty()) break;
                    PixelCoord chosen = next[0];
                    for (PixelCoord n : next)
                        if (coord_less_yx(n, chosen)) chosen = n;
                    path.push_back(chosen);
                    mark(chosen);
                    --remaining;
                    cur = chosen;
                }
                // Closed loop: every pixel had two neighbors, trace returned
                // next to the start; repeat the first point as the last.
                bool loop = path.size() >= 3 && remaining == 0 &&
                            reduced_neighbors(start).size() == 2;
                if (loop) {
                    int ddx = std::abs(path.back().x - start.x);
                    int ddy = std::abs(path.back().y - start.y);
                    if (ddx <= 1 && ddy <= 1)
                        path.push_back(start);
                    else
                        loop = false;
                }
                if (!loop) {
                    PixelCoord j{};
                    if (adjacent_junction(junctions, path.front(), j))
                        path.insert(path.begin(), j);
                    if (adjacent_junction(junctions, path.back(), j)) path.push_back(j);
                }
                if (path.size() >= 2) paths.push_back(std::move(path));
            }
        }
    }

    // Junction pixels directly adjacent to each other are not covered by any
    // arc; emit them as two-point segments.
    for (PixelCoord j : junctions) {
        for (auto [dx, dy] : kRing) {
            PixelCoord n{j.x + dx, j.y + dy};
            if (junctions.count(n) && coord_less_yx(j, n)) paths.push_back({j, n});
        }
    }

    // Canonical orientation and deterministic ordering.
    for (auto& p : paths) {
        if (p.front() == p.back()) continue; // loop keeps its start
        if (coord_less_yx(p.back(), p.front())) std::reverse(p.begin(), p.end());
    }
    std::sort(paths.begin(), paths.end(), [](const auto& a, const auto& b) {
        auto key = [](const std::vector<PixelCoord>& p) {
            return std::tuple(p.front().y, p.front().x, p.back().y, p.back().x, p.size());
        };
        return key(a) < key(b);
    });

    std::vector<LineSegment> segments;
    segments.reserve(paths.size());
    for (size_t i = 0; i < paths.size(); ++i)
        segments.push_back({static_cast<int>(i), std::move(paths[i])});
    return segments;
}

void save_segments(const TracedSegments& traced, const std::string& path) {
    nlohmann::json j;
    j["width"] = traced.width;
    j["height"] = traced.height;
    j["segments"] = nlohmann::json::array();
    for (const LineSegment& s : traced.segments) {
        nlohmann::json js;
        js["id"] = s.id;
        auto& pts = js["points"] = nlohmann::json::array();
        for (PixelCoord p : s.points) pts.push_back({p.x, p.y});
        j["segments"].push_back(std::move(js));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write segment file: " + path);
    out << j.dump(1) << "\n";
}

TracedSegments load_segments(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read segment file: " + path);
    nlohmann::json j;
    in >> j;
    TracedSegments traced;
    traced.width = j.at("width").get<int>();
    traced.height = j.at("height").get<int>();
    for (const auto& js : j.at("segments")) {
        LineSegment s;
        s.id = js.at("id").get<int>();
        for (const auto& jp : js.at("points"))
            s.points.push_back({jp.at(0).get<int>(), jp.at(1).get<int>()});
        if (s.points.size() < 2)
            throw std::runtime_error("segment file: segment with fewer than 2 points");
        traced.segments.push_back(std::move(s));
    }
    return traced;
}

} // namespace drawpath

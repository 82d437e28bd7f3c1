#include "drawpath/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace drawpath {

namespace {

constexpr double kGain = 1e-9; // minimum accepted improvement

// Directed-node cost tables. Node index = 2*segment + direction bit
// (1 = Forward); flipping a node's direction toggles the low bit.
struct CostModel {
    const GtspInstance* inst = nullptr;
    int k = 0;
    double cost_lift = 0.0;
    std::vector<Point2> node_start, node_end;
    std::vector<double> trans;    // [a * 2k + b]: travel + lift between nodes
    std::vector<double> home_out; // home -> node start
    std::vector<double> home_in;  // node end -> home
    std::vector<double> seg_dist; // [a * k + b]: min endpoint distance
    std::vector<std::vector<int>> candidates; // nearest segments, per segment
    std::vector<int> home_candidates;

    static constexpr int kCandidates = 8;

    explicit CostModel(const GtspInstance& instance) : inst(&instance) {
        k = instance.num_segments();
        cost_lift = instance.cost_lift;
        const int n = 2 * k;
        node_start.resize(n);
        node_end.resize(n);
        for (int s = 0; s < k; ++s) {
            for (int bit = 0; bit < 2; ++bit) {
                DirectedNode dn =
                    instance.node(s, bit ? Direction::Forward : Direction::Reverse);
                node_start[2 * s + bit] = dn.start;
                node_end[2 * s + bit] = dn.end;
            }
        }
        trans.resize(static_cast<size_t>(n) * n);
        home_out.resize(n);
        home_in.resize(n);
        for (int a = 0; a < n; ++a) {
            home_out[a] = distance(instance.home, node_start[a]);
            home_in[a] = distance(node_end[a], instance.home);
            for (int b = 0; b < n; ++b) {
                double d = distance(node_end[a], node_start[b]);
                trans[static_cast<size_t>(a) * n + b] = d + (d > 0.0 ? cost_lift : 0.0);
            }
        }
        seg_dist.resize(static_cast<size_t>(k) * k, 0.0);
        for (int a = 0; a < k; ++a) {
            for (int b = 0; b < k; ++b) {
                double best = std::numeric_limits<double>::infinity();
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        best = std::min(best, distance(node_end[2 * a + i],
                                                       node_start[2 * b + j]));
                seg_dist[static_cast<size_t>(a) * k + b] = best;
            }
        }
        candidates.resize(static_cast<size_t>(k));
        std::vector<int> all(static_cast<size_t>(k));
        std::iota(all.begin(), all.end(), 0);
        for (int a = 0; a < k; ++a) {
            std::vector<int> order = all;
            std::sort(order.begin(), order.end(), [&](int x, int y) {
                double dx = seg_dist[static_cast<size_t>(a) * k + x];
                double dy = seg_dist[static_cast<size_t>(a) * k + y];
                return dx != dy ? dx < dy : x < y;
            });
            for (int c : order) {
                if (c == a) continue;
                candidates[static_cast<size_t>(a)].push_back(c);
                if (static_cast<int>(candidates[static_cast<size_t>(a)].size()) >= kCandidates)
                    break;
            }
        }
        home_candidates = all;
        std::sort(home_candidates.begin(), home_candidates.end(), [&](int x, int y) {
            double dx = std::min(home_out[2 * x], home_out[2 * x + 1]);
            double dy = std::min(home_out[2 * y], home_out[2 * y + 1]);
            return dx != dy ? dx < dy : x < y;
        });
        if (static_cast<int>(home_candidates.size()) > kCandidates)
            home_candidates.resize(kCandidates);
    }

    double edge(int a, int b) const { return trans[static_cast<size_t>(a) * (2 * k) + b]; }
    double sdist(int a, int b) const { return seg_dist[static_cast<size_t>(a) * k + b]; }

    double tour_cost(const std::vector<int>& nodes) const {
        double c = 2.0 * cost_lift + home_out[nodes.front()] + home_in[nodes.back()];
        for (size_t i = 0; i + 1 < nodes.size(); ++i) c += edge(nodes[i], nodes[i + 1]);
        return c;
    }
};

std::vector<int> to_nodes(const DrawingPath& p) {
    std::vector<int> nodes;
    nodes.reserve(p.tour.size());
    for (auto [id, dir] : p.tour)
        nodes.push_back(2 * id + (dir == Direction::Forward ? 1 : 0));
    return nodes;
}

DrawingPath from_nodes(const std::vector<int>& nodes) {
    DrawingPath p;
    p.tour.reserve(nodes.size());
    for (int n : nodes)
        p.tour.emplace_back(n / 2, (n & 1) ? Direction::Forward : Direction::Reverse);
    return p;
}

// Best-improvement 2-opt on directed nodes. Reversing positions i..j flips
// every node in the span; only the two boundary edges change cost.
void two_opt_impl(const CostModel& cm, std::vector<int>& nodes) {
    const int n = static_cast<int>(nodes.size());
    for (;;) {
        double best_delta = -kGain;
        int best_i = -1, best_j = -1;
        for (int i = 0; i < n; ++i) {
            double in_old = i == 0 ? cm.home_out[nodes[i]] : cm.edge(nodes[i - 1], nodes[i]);
            for (int j = i; j < n; ++j) {
                double out_old =
                    j == n - 1 ? cm.home_in[nodes[j]] : cm.edge(nodes[j], nodes[j + 1]);
                int head = nodes[j] ^ 1; // flipped span tail becomes the head
                int tail = nodes[i] ^ 1;
                double in_new = i == 0 ? cm.home_out[head] : cm.edge(nodes[i - 1], head);
                double out_new = j == n - 1 ? cm.home_in[tail] : cm.edge(tail, nodes[j + 1]);
                double delta = in_new + out_new - in_old - out_old;
                if (delta < best_delta) {
                    best_delta = delta;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (best_i < 0) break;
        std::reverse(nodes.begin() + best_i, nodes.begin() + best_j + 1);
        for (int p = best_i; p <= best_j; ++p) nodes[p] ^= 1;
    }
}

// Exact direction assignment for a fixed segment order: forward DP with two
// states per position.
double orient_dp(const CostModel& cm, const std::vector<int>& order, std::vector<int>* nodes_out) {
    const int n = static_cast<int>(order.size());
    std::vector<std::array<double, 2>> dp(static_cast<size_t>(n));
    std::vector<std::array<int, 2>> from(static_cast<size_t>(n));
    dp[0] = {cm.home_out[2 * order[0]], cm.home_out[2 * order[0] + 1]};
    for (int i = 1; i < n; ++i) {
        for (int bit = 0; bit < 2; ++bit) {
            int node = 2 * order[i] + bit;
            double c0 = dp[i - 1][0] + cm.edge(2 * order[i - 1], node);
            double c1 = dp[i - 1][1] + cm.edge(2 * order[i - 1] + 1, node);
            dp[static_cast<size_t>(i)][static_cast<size_t>(bit)] = std::min(c0, c1);
            from[static_cast<size_t>(i)][static_cast<size_t>(bit)] = c0 <= c1 ? 0 : 1;
        }
    }
    double c0 = dp[n - 1][0] + cm.home_in[2 * order[n - 1]];
    double c1 = dp[n - 1][1] + cm.home_in[2 * order[n - 1] + 1];
    double total = 2.0 * cm.cost_lift + std::min(c0, c1);
    if (nodes_out) {
        nodes_out->assign(static_cast<size_t>(n), 0);
        int bit = c0 <= c1 ? 0 : 1;
        for (int i = n - 1; i >= 0; --i) {
            (*nodes_out)[static_cast<size_t>(i)] = 2 * order[i] + bit;
            if (i > 0) bit = from[static_cast<size_t>(i)][static_cast<size_t>(bit)];
        }
    }
    return total;
}

// Variable-depth chain of span reversals over the segment order. Gains are
// screened with the surrogate segment distance; real costs come from the
// direction DP. Commits the first chain that beats best_cost.
class LkSearch {
public:
    LkSearch(const CostModel& cm, std::vector<int> order)
        : cm_(cm), order_(std::move(order)) {
        pos_.resize(order_.size());
        for (size_t i = 0; i < order_.size(); ++i) pos_[static_cast<size_t>(order_[i])] = i;
        best_cost_ = orient_dp(cm_, order_, nullptr);
    }

    double best_cost() const { return best_cost_; }
    const std::vector<int>& order() const { return order_; }

    bool improve_pass() {
        bool improved = false;
        const int n = static_cast<int>(order_.size());
        for (int anchor = 0; anchor < n; ++anchor)
            if (chain(anchor, 1, 0.0)) improved = true;
        return improved;
    }

private:
    static constexpr int kMaxDepth = 5;
    static constexpr int kBreadth = 5;

    double removed_surrogate(int anchor) const {
        if (anchor == 0)
            return std::min(cm_.home_out[2 * order_[0]], cm_.home_out[2 * order_[0] + 1]);
        return cm_.sdist(order_[static_cast<size_t>(anchor) - 1],
                         order_[static_cast<size_t>(anchor)]);
    }

    double added_surrogate(int anchor, int cand_seg) const {
        if (anchor == 0)
            return std::min(cm_.home_out[2 * cand_seg], cm_.home_out[2 * cand_seg + 1]);
        return cm_.sdist(order_[static_cast<size_t>(anchor) - 1], cand_seg);
    }

    void reverse_span(int i, int j) {
        std::reverse(order_.begin() + i, order_.begin() + j + 1);
        for (int p = i; p <= j; ++p) pos_[static_cast<size_t>(order_[p])] = static_cast<size_t>(p);
    }

    bool chain(int anchor, int depth, double gain) {
        const int n = static_cast<int>(order_.size());
        const std::vector<int>& cand =
            anchor == 0 ? cm_.home_candidates
                        : cm_.candidates[static_cast<size_t>(order_[anchor - 1])];
        double removed = removed_surrogate(anchor);
        int breadth = depth <= 2 ? kBreadth : 1;
        int tried = 0;
        for (int c : cand) {
            if (tried >= breadth) break;
            int j = static_cast<int>(pos_[static_cast<size_t>(c)]);
            if (j < anchor || j == anchor) continue;
            ++tried;
            double g = gain + removed - added_surrogate(anchor, c);
            reverse_span(anchor, j);
            double cost = orient_dp(cm_, order_, nullptr);
            if (cost < best_cost_ - kGain) {
                best_cost_ = cost;
                return true;
            }
            if (depth < kMaxDepth && g > kGain && j + 1 < n && chain(j + 1, depth + 1, g))
                return true;
            reverse_span(anchor, j);
        }
        return false;
    }

    const CostModel& cm_;
    std::vector<int> order_;
    std::vector<size_t> pos_;
    double best_cost_ = 0.0;
};

std::vector<int> lk_impl(const CostModel& cm, const std::vector<int>& nodes) {
    // Start from the 2-opt local optimum so the result can never be worse
    // than level-one improvement alone.
    std::vector<int> start = nodes;
    two_opt_impl(cm, start);
    std::vector<int> order;
    order.reserve(start.size());
    for (int n : start) order.push_back(n / 2);
    LkSearch search(cm, std::move(order));
    while (search.improve_pass()) {
    }
    std::vector<int> out;
    orient_dp(cm, search.order(), &out);
    two_opt_impl(cm, out);
    return out;
}

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream per (seed, generation, slot): results do not depend on
// how offspring evaluation is scheduled.
Rng slot_rng(uint64_t seed, int generation, int slot) {
    uint64_t s = mix64(seed);
    s = mix64(s ^ (0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(generation)));
    s = mix64(s ^ (0xc2b2ae3d27d4eb4fULL + static_cast<uint64_t>(slot)));
    return Rng(s);
}

double exact_fitness(const GtspInstance& inst, const std::vector<int>& nodes) {
    return evaluate(inst, from_nodes(nodes)).v_fitness;
}

Individual improve_impl(const CostModel& cm, const Individual& ind,
                        const std::vector<Individual>& parents, int stall_count,
                        const GaConfig& cfg, bool use_lk, long long* lk_invocations) {
    std::vector<int> nodes = to_nodes(decode(ind.chromosome));
    two_opt_impl(cm, nodes);
    double fit = exact_fitness(*cm.inst, nodes);

    bool lk_applied = false;
    if (use_lk && !parents.empty()) {
        double v_thres = improvement_threshold_percentile(cfg, stall_count);
        int n = static_cast<int>(parents.size());
        int rank = static_cast<int>(std::ceil(v_thres * n));
        rank = std::clamp(rank, 1, n);
        double threshold = parents[static_cast<size_t>(rank) - 1].fitness;
        if (fit < threshold) {
            if (lk_invocations) ++*lk_invocations;
            nodes = lk_impl(cm, nodes);
            double lk_fit = exact_fitness(*cm.inst, nodes);
            if (lk_fit < fit) fit = lk_fit;
            lk_applied = true;
        }
    }
    Individual out;
    out.chromosome = encode(from_nodes(nodes));
    out.fitness = fit;
    out.improved = lk_applied;
    return out;
}

} // namespace

void GaConfig::validate() const {
    if (population_size < 1) throw std::invalid_argument("GaConfig: population_size must be >= 1");
    if (elite_count < 0 || elite_count >= population_size)
        throw std::invalid_argument("GaConfig: need 0 <= elite_count < population_size");
    for (double p : {p_crossover, p_mutation, key_inherit_p, reverse_p, shuffle_p, flip_p})
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("GaConfig: probabilities must lie in [0,1]");
    if (tournament_k < 1) throw std::invalid_argument("GaConfig: tournament_k must be >= 1");
    if (thres_base > thres_cap)
        throw std::invalid_argument("GaConfig: thres_base must be <= thres_cap");
    if (max_generations < 0 || stall_limit < 0)
        throw std::invalid_argument("GaConfig: generation limits must be >= 0");
}

DrawingPath greedy(const GtspInstance& inst) {
    CostModel cm(inst);
    const int k = cm.k;
    std::vector<uint8_t> used(static_cast<size_t>(k), 0);
    std::vector<int> nodes;
    nodes.reserve(static_cast<size_t>(k));
    Point2 cur = inst.home;
    for (int step = 0; step < k; ++step) {
        int best_node = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int s = 0; s < k; ++s) {
            if (used[static_cast<size_t>(s)]) continue;
            // Forward before Reverse on ties, so probe bit 1 first.
            for (int bit : {1, 0}) {
                int node = 2 * s + bit;
                double d = distance(cur, cm.node_start[static_cast<size_t>(node)]);
                if (d < best_d) {
                    best_d = d;
                    best_node = node;
                }
            }
        }
        used[static_cast<size_t>(best_node / 2)] = 1;
        nodes.push_back(best_node);
        cur = cm.node_end[static_cast<size_t>(best_node)];
    }
    return from_nodes(nodes);
}

DrawingPath two_opt(const GtspInstance& inst, const DrawingPath& p) {
    validate_path(inst, p);
    CostModel cm(inst);
    std::vector<int> nodes = to_nodes(p);
    two_opt_impl(cm, nodes);
    return from_nodes(nodes);
}

DrawingPath lin_kernighan(const GtspInstance& inst, const DrawingPath& p) {
    validate_path(inst, p);
    CostModel cm(inst);
    return from_nodes(lk_impl(cm, to_nodes(p)));
}

const Individual& tournament_select(const std::vector<Individual>& pop, int k, Rng& rng) {
    if (pop.empty()) throw std::invalid_argument("tournament_select: empty population");
    if (k < 1) throw std::invalid_argument("tournament_select: k must be >= 1");
    std::uniform_int_distribution<size_t> pick(0, pop.size() - 1);
    const Individual* best = &pop[pick(rng)];
    for (int i = 1; i < k; ++i) {
        const Individual* cand = &pop[pick(rng)];
        if (cand->fitness < best->fitness) best = cand;
    }
    return *best;
}

Chromosome uniform_crossover(const Chromosome& p1, const Chromosome& p2, const GaConfig& cfg,
                             Rng& rng) {
    if (p1.keys.size() != p2.keys.size())
        throw std::invalid_argument("uniform_crossover: length mismatch");
    Chromosome first = p1;
    if (std::bernoulli_distribution(cfg.reverse_p)(rng)) {
        // Tour reversal in key space: flip every direction bit and mirror the
        // visit order (a zero decimal stays zero).
        for (double& key : first.keys) {
            double intpart = std::floor(key);
            double frac = key - intpart;
            key = (1.0 - intpart) + (frac == 0.0 ? 0.0 : 1.0 - frac);
        }
    }
    Chromosome child;
    child.keys.resize(first.keys.size());
    std::bernoulli_distribution inherit(cfg.key_inherit_p);
    for (size_t i = 0; i < child.keys.size(); ++i)
        child.keys[i] = inherit(rng) ? first.keys[i] : p2.keys[i];
    return child;
}

Chromosome mutate(const Chromosome& c, const GaConfig& cfg, Rng& rng) {
    Chromosome out = c;
    if (std::bernoulli_distribution(cfg.shuffle_p)(rng)) {
        std::vector<double> fracs(out.keys.size());
        for (size_t i = 0; i < out.keys.size(); ++i)
            fracs[i] = out.keys[i] - std::floor(out.keys[i]);
        std::shuffle(fracs.begin(), fracs.end(), rng);
        for (size_t i = 0; i < out.keys.size(); ++i)
            out.keys[i] = std::floor(out.keys[i]) + fracs[i];
    }
    std::bernoulli_distribution flip(cfg.flip_p);
    for (double& key : out.keys) {
        if (flip(rng)) {
            double intpart = std::floor(key);
            key = (1.0 - intpart) + (key - intpart);
        }
    }
    return out;
}

double improvement_threshold_percentile(const GaConfig& cfg, int stall_count) {
    return std::min(cfg.thres_base + cfg.thres_step * stall_count, cfg.thres_cap);
}

Individual improve(const Individual& ind, const std::vector<Individual>& parents,
                   int stall_count, const GaConfig& cfg, const GtspInstance& inst, bool use_lk,
                   long long* lk_invocations) {
    CostModel cm(inst);
    return improve_impl(cm, ind, parents, stall_count, cfg, use_lk, lk_invocations);
}

std::pair<DrawingPath, SolveStats> run_rkga(const GtspInstance& inst, const GaConfig& cfg,
                                            bool use_lk) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const int k = inst.num_segments();
    const int n = cfg.population_size;
    CostModel cm(inst);
    SolveStats stats;

    // Random keys: Bernoulli(0.5) direction bit + uniform [0,1) decimal,
    // followed by level-one improvement like any other new individual.
    std::vector<Individual> pop(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Rng rng = slot_rng(cfg.seed, 0, i);
        std::bernoulli_distribution bit(0.5);
        std::uniform_real_distribution<double> dec(0.0, 1.0);
        Chromosome c;
        c.keys.resize(static_cast<size_t>(k));
        for (double& key : c.keys) key = (bit(rng) ? 1.0 : 0.0) + dec(rng);
        Individual raw{std::move(c), 0.0, false};
        pop[static_cast<size_t>(i)] = improve_impl(cm, raw, {}, 0, cfg, false, nullptr);
        ++stats.evaluations;
    }

    auto by_fitness = [](const Individual& a, const Individual& b) {
        return a.fitness < b.fitness;
    };
    std::stable_sort(pop.begin(), pop.end(), by_fitness);
    double best_fitness = pop.front().fitness;
    Chromosome best_chromosome = pop.front().chromosome;
    stats.best_fitness_per_generation.push_back(best_fitness);

    int stall = 0;
    for (int gen = 1; gen <= cfg.max_generations && stall < cfg.stall_limit; ++gen) {
        std::vector<Individual> next(pop.begin(), pop.begin() + cfg.elite_count);
        next.resize(static_cast<size_t>(n));
        // Offspring slots are independent; each derives its RNG stream from
        // (seed, generation, slot) so any evaluation order gives the same run.
        for (int slot = cfg.elite_count; slot < n; ++slot) {
            Rng rng = slot_rng(cfg.seed, gen, slot);
            const Individual& a = tournament_select(pop, cfg.tournament_k, rng);
            const Individual& b = tournament_select(pop, cfg.tournament_k, rng);
            const Individual& first = a.fitness <= b.fitness ? a : b;
            const Individual& second = a.fitness <= b.fitness ? b : a;
            Chromosome child;
            if (std::bernoulli_distribution(cfg.p_crossover)(rng))
                child = uniform_crossover(first.chromosome, second.chromosome, cfg, rng);
            else
                child = first.chromosome;
            if (std::bernoulli_distribution(cfg.p_mutation)(rng))
                child = mutate(child, cfg, rng);
            Individual raw{std::move(child), 0.0, false};
            next[static_cast<size_t>(slot)] =
                improve_impl(cm, raw, pop, stall, cfg, use_lk, &stats.lk_invocations);
            ++stats.evaluations;
        }
        pop = std::move(next);
        std::stable_sort(pop.begin(), pop.end(), by_fitness);
        if (pop.front().fitness < best_fitness - kGain) {
            best_fitness = pop.front().fitness;
            best_chromosome = pop.front().chromosome;
            stall = 0;
        } else {
            ++stall;
        }
        stats.best_fitness_per_generation.push_back(best_fitness);
    }

    stats.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {decode(best_chromosome), stats};
}

} // namespace drawpath

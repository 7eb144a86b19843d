#include <algorithm>
#include <limits>
#include <stdexcept>

#include "gr1/bdd.hpp"

namespace gr1::bdd {

namespace {

constexpr int kInfeasible = std::numeric_limits<int>::max() / 4;

// Choices per variable in the meta-product: don't-care, negative literal,
// positive literal. Occurrence variable of level i is 2i, sign variable 2i+1.
constexpr int kDontCare = 0;
constexpr int kNegative = 1;
constexpr int kPositive = 2;

}  // namespace

PrimeCubeEnumerator Manager::prime_cubes(const Bdd& f, const VarSet& vars) {
    check_owner(f);
    VarSet sorted = vars;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int v : support(f)) {
        if (!std::binary_search(sorted.begin(), sorted.end(), v)) {
            throw std::invalid_argument("prime_cubes: support escapes the variable set (" +
                                        var_name(v) + ")");
        }
    }

    auto meta = std::make_shared<Manager>();
    for (int v : sorted) meta->new_proposition(var_name(v));
    const int n = static_cast<int>(sorted.size());

    // Primes(f) = Primes(f0 & f1)
    //           + !x . (Primes(f0) - Primes(f0 & f1))
    //           +  x . (Primes(f1) - Primes(f0 & f1))
    // The memo keeps the key function alive so node ids cannot be recycled.
    std::unordered_map<std::uint64_t, std::pair<Bdd, Bdd>> memo;
    auto primes = [&](auto&& self, const Bdd& g, int level) -> Bdd {
        if (g.is_false()) return meta->bdd_false();
        if (level == n) return g.is_true() ? meta->bdd_true() : meta->bdd_false();
        const std::uint64_t key = static_cast<std::uint64_t>(g.id()) * (n + 1) + level;
        if (auto it = memo.find(key); it != memo.end()) return it->second.second;

        Bdd occ = meta->var(2 * level);
        Bdd sign = meta->var(2 * level + 1);
        Bdd absent = !occ & !sign;
        Bdd result;
        if (g.is_true() || g.var() != sorted[static_cast<std::size_t>(level)]) {
            result = self(self, g, level + 1) & absent;
        } else {
            Bdd g0 = g.low();
            Bdd g1 = g.high();
            Bdd both = self(self, g0 & g1, level + 1);
            Bdd neg = self(self, g0, level + 1).diff(both);
            Bdd pos = self(self, g1, level + 1).diff(both);
            result = (both & absent) | (neg & occ & !sign) | (pos & occ & sign);
        }
        memo.emplace(key, std::make_pair(g, result));
        return result;
    };
    Bdd set = primes(primes, f, 0);
    memo.clear();
    return PrimeCubeEnumerator(std::move(meta), std::move(set), std::move(sorted));
}

PrimeCubeEnumerator::PrimeCubeEnumerator(std::shared_ptr<Manager> meta, Bdd primes, VarSet vars)
    : meta_(std::move(meta)), primes_(std::move(primes)), vars_(std::move(vars)) {
    if (primes_.is_false()) {
        done_ = true;
        return;
    }
    target_ = min_literals(primes_.id(), 0);
    start_level();
}

std::uint32_t PrimeCubeEnumerator::child(std::uint32_t node, int level, int choice) {
    auto cofactor = [&](std::uint32_t m, std::uint32_t var, bool value) {
        if (m > Manager::kTrue && meta_->nodes_[m].var == var) {
            return value ? meta_->nodes_[m].hi : meta_->nodes_[m].lo;
        }
        return m;
    };
    const auto occ = static_cast<std::uint32_t>(2 * level);
    std::uint32_t m = cofactor(node, occ, choice != kDontCare);
    return cofactor(m, occ + 1, choice == kPositive);
}

int PrimeCubeEnumerator::min_literals(std::uint32_t node, int level) {
    if (node == Manager::kFalse) return kInfeasible;
    if (level == static_cast<int>(vars_.size())) return node == Manager::kTrue ? 0 : kInfeasible;
    const std::uint64_t key = (static_cast<std::uint64_t>(node) << 16) | static_cast<unsigned>(level);
    if (auto it = min_memo_.find(key); it != min_memo_.end()) return it->second;
    int best = kInfeasible;
    for (int c = kDontCare; c <= kPositive; ++c) {
        int sub = min_literals(child(node, level, c), level + 1);
        if (sub < kInfeasible) best = std::min(best, sub + (c != kDontCare ? 1 : 0));
    }
    min_memo_[key] = best;
    return best;
}

int PrimeCubeEnumerator::max_literals(std::uint32_t node, int level) {
    if (node == Manager::kFalse) return -kInfeasible;
    if (level == static_cast<int>(vars_.size())) return node == Manager::kTrue ? 0 : -kInfeasible;
    const std::uint64_t key = (static_cast<std::uint64_t>(node) << 16) | static_cast<unsigned>(level);
    if (auto it = max_memo_.find(key); it != max_memo_.end()) return it->second;
    int best = -kInfeasible;
    for (int c = kDontCare; c <= kPositive; ++c) {
        int sub = max_literals(child(node, level, c), level + 1);
        if (sub > -kInfeasible) best = std::max(best, sub + (c != kDontCare ? 1 : 0));
    }
    max_memo_[key] = best;
    return best;
}

void PrimeCubeEnumerator::start_level() {
    stack_.clear();
    const int most = max_literals(primes_.id(), 0);
    if (target_ > most) {
        done_ = true;
        return;
    }
    stack_.push_back({primes_.id(), 0, kDontCare, 0, -1});
}

std::optional<Cube> PrimeCubeEnumerator::next() {
    const int n = static_cast<int>(vars_.size());
    while (!done_) {
        if (stack_.empty()) {
            ++target_;
            start_level();
            continue;
        }
        Frame& top = stack_.back();
        if (top.level == n) {
            Cube cube;
            for (std::size_t i = 1; i < stack_.size(); ++i) {
                int c = stack_[i].choice_in;
                if (c != kDontCare) cube.emplace_back(vars_[i - 1], c == kPositive);
            }
            stack_.pop_back();
            return cube;
        }
        if (top.next_choice > kPositive) {
            stack_.pop_back();
            continue;
        }
        const int c = top.next_choice++;
        const std::uint32_t sub = child(top.node, top.level, c);
        const int lits = top.literals + (c != kDontCare ? 1 : 0);
        const int level = top.level + 1;
        const int lo = min_literals(sub, level);
        const int hi = max_literals(sub, level);
        if (lo < kInfeasible && lits + lo <= target_ && target_ <= lits + hi) {
            stack_.push_back({sub, level, kDontCare, lits, c});
        }
    }
    return std::nullopt;
}

}  // namespace gr1::bdd

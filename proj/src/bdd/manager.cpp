#include "gr1/bdd.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace gr1::bdd {

namespace {

constexpr std::uint32_t kFreeVar = UINT32_MAX - 1;
constexpr std::size_t kInitialBuckets = 1u << 12;
constexpr std::size_t kMaxCache = 1u << 22;

enum CacheOp : std::uint32_t {
    kOpNot = 16,
    kOpExists,
    kOpAndExists,
    kOpPrime,
    kOpUnprime,
    kOpRestrict,
};

inline std::size_t hash3(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    std::uint64_t h = a;
    h = h * 0x9E3779B97F4A7C15ull + b;
    h = h * 0x9E3779B97F4A7C15ull + c;
    h ^= h >> 29;
    return static_cast<std::size_t>(h);
}

bool commutative(Op op) {
    return op == Op::And || op == Op::Or || op == Op::Xor || op == Op::Iff;
}

}  // namespace

// ---------------------------------------------------------------------------
// Bdd handle

Bdd::Bdd(Manager* mgr, std::uint32_t id) : mgr_(mgr), id_(id) { mgr_->ref(id_); }

Bdd::Bdd(const Bdd& other) : mgr_(other.mgr_), id_(other.id_) {
    if (mgr_) mgr_->ref(id_);
}

Bdd::Bdd(Bdd&& other) noexcept : mgr_(other.mgr_), id_(other.id_) { other.mgr_ = nullptr; }

Bdd& Bdd::operator=(const Bdd& other) {
    if (this != &other) {
        if (other.mgr_) other.mgr_->ref(other.id_);
        if (mgr_) mgr_->deref(id_);
        mgr_ = other.mgr_;
        id_ = other.id_;
    }
    return *this;
}

Bdd& Bdd::operator=(Bdd&& other) noexcept {
    if (this != &other) {
        if (mgr_) mgr_->deref(id_);
        mgr_ = other.mgr_;
        id_ = other.id_;
        other.mgr_ = nullptr;
    }
    return *this;
}

Bdd::~Bdd() {
    if (mgr_) mgr_->deref(id_);
}

bool Bdd::is_true() const { return mgr_ && id_ == Manager::kTrue; }
bool Bdd::is_false() const { return mgr_ && id_ == Manager::kFalse; }
int Bdd::var() const { return static_cast<int>(mgr_->nodes_[id_].var); }
Bdd Bdd::low() const { return Bdd(mgr_, mgr_->nodes_[id_].lo); }
Bdd Bdd::high() const { return Bdd(mgr_, mgr_->nodes_[id_].hi); }
Bdd Bdd::operator!() const { return mgr_->negate(*this); }
Bdd Bdd::operator&(const Bdd& g) const { return mgr_->apply(Op::And, *this, g); }
Bdd Bdd::operator|(const Bdd& g) const { return mgr_->apply(Op::Or, *this, g); }
Bdd Bdd::operator^(const Bdd& g) const { return mgr_->apply(Op::Xor, *this, g); }
Bdd Bdd::implies(const Bdd& g) const { return mgr_->apply(Op::Implies, *this, g); }
Bdd Bdd::iff(const Bdd& g) const { return mgr_->apply(Op::Iff, *this, g); }
Bdd Bdd::diff(const Bdd& g) const { return mgr_->apply(Op::Diff, *this, g); }

// ---------------------------------------------------------------------------
// Manager bookkeeping

Manager::Manager(ManagerOptions options)
    : options_(options), gc_threshold_(options.gc_threshold) {
    nodes_.push_back({kTerminalVar, kFalse, kFalse});
    nodes_.push_back({kTerminalVar, kTrue, kTrue});
    ext_refs_.assign(2, 1);
    chain_.assign(2, UINT32_MAX);
    buckets_.assign(kInitialBuckets, UINT32_MAX);
    cache_.resize(1u << 16);
}

Manager::~Manager() = default;

int Manager::new_proposition(std::string name) {
    names_.push_back(std::move(name));
    return static_cast<int>(names_.size()) - 1;
}

std::string Manager::var_name(int var) const {
    const std::string& base = names_.at(static_cast<std::size_t>(var / 2));
    return is_primed_var(var) ? base + "'" : base;
}

void Manager::ref(std::uint32_t id) { ++ext_refs_[id]; }
void Manager::deref(std::uint32_t id) { --ext_refs_[id]; }

void Manager::check_owner(const Bdd& f) const {
    if (f.mgr_ != this) throw std::invalid_argument("BDD belongs to a different manager");
}

void Manager::tick() {
    if ((++ticks_ & 0xFFF) == 0 && options_.deadline &&
        std::chrono::steady_clock::now() > *options_.deadline) {
        throw ResourceLimit("BDD operation deadline exceeded");
    }
}

void Manager::maybe_collect() {
    if (live_nodes() > gc_threshold_) {
        collect_garbage();
        if (live_nodes() * 2 > gc_threshold_) gc_threshold_ = live_nodes() * 2;
    }
}

void Manager::collect_garbage() {
    std::vector<char> mark(nodes_.size(), 0);
    std::vector<std::uint32_t> stack;
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
        if (ext_refs_[i] > 0 && nodes_[i].var != kFreeVar) stack.push_back(i);
    }
    while (!stack.empty()) {
        std::uint32_t n = stack.back();
        stack.pop_back();
        if (mark[n]) continue;
        mark[n] = 1;
        if (nodes_[n].var < kFreeVar) {
            stack.push_back(nodes_[n].lo);
            stack.push_back(nodes_[n].hi);
        }
    }
    std::fill(buckets_.begin(), buckets_.end(), UINT32_MAX);
    for (std::uint32_t i = 2; i < nodes_.size(); ++i) {
        Node& node = nodes_[i];
        if (node.var == kFreeVar) continue;
        if (!mark[i]) {
            node.var = kFreeVar;
            free_.push_back(i);
            continue;
        }
        std::size_t b = hash3(node.var, node.lo, node.hi) & (buckets_.size() - 1);
        chain_[i] = buckets_[b];
        buckets_[b] = i;
    }
    for (auto& e : cache_) e.op = UINT32_MAX;
}

std::uint32_t Manager::mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi) {
    if (lo == hi) return lo;
    std::size_t b = hash3(var, lo, hi) & (buckets_.size() - 1);
    for (std::uint32_t n = buckets_[b]; n != UINT32_MAX; n = chain_[n]) {
        const Node& node = nodes_[n];
        if (node.var == var && node.lo == lo && node.hi == hi) return n;
    }
    if (options_.node_budget && live_nodes() >= options_.node_budget) {
        throw ResourceLimit("BDD node budget exhausted");
    }
    std::uint32_t id;
    if (!free_.empty()) {
        id = free_.back();
        free_.pop_back();
        nodes_[id] = {var, lo, hi};
        ext_refs_[id] = 0;
    } else {
        id = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back({var, lo, hi});
        ext_refs_.push_back(0);
        chain_.push_back(UINT32_MAX);
    }
    chain_[id] = buckets_[b];
    buckets_[b] = id;
    peak_ = std::max(peak_, live_nodes());

    if (nodes_.size() > buckets_.size()) {
        buckets_.assign(buckets_.size() * 2, UINT32_MAX);
        for (std::uint32_t i = 2; i < nodes_.size(); ++i) {
            const Node& node = nodes_[i];
            if (node.var == kFreeVar) continue;
            std::size_t nb = hash3(node.var, node.lo, node.hi) & (buckets_.size() - 1);
            chain_[i] = buckets_[nb];
            buckets_[nb] = i;
        }
        if (cache_.size() < buckets_.size() && cache_.size() < kMaxCache) {
            cache_.assign(std::min(buckets_.size(), kMaxCache), CacheEntry{});
        }
    }
    return id;
}

bool Manager::cache_lookup(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                           std::uint32_t& result) const {
    const CacheEntry& e = cache_[hash3(a ^ (op << 24), b, c) & (cache_.size() - 1)];
    if (e.op == op && e.a == a && e.b == b && e.c == c) {
        result = e.result;
        return true;
    }
    return false;
}

void Manager::cache_store(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                          std::uint32_t result) {
    cache_[hash3(a ^ (op << 24), b, c) & (cache_.size() - 1)] = {op, a, b, c, result};
}

// ---------------------------------------------------------------------------
// Constructors of simple functions

Bdd Manager::bdd_true() { return wrap(kTrue); }
Bdd Manager::bdd_false() { return wrap(kFalse); }

Bdd Manager::var(int v) {
    if (v < 0 || v >= var_count()) throw std::out_of_range("BDD variable index out of range");
    return wrap(mk(static_cast<std::uint32_t>(v), kFalse, kTrue));
}

Bdd Manager::nvar(int v) {
    if (v < 0 || v >= var_count()) throw std::out_of_range("BDD variable index out of range");
    return wrap(mk(static_cast<std::uint32_t>(v), kTrue, kFalse));
}

Bdd Manager::cube_of(const VarSet& vars) {
    VarSet sorted = vars;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::uint32_t r = kTrue;
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
        if (*it < 0 || *it >= var_count()) throw std::out_of_range("BDD variable index out of range");
        r = mk(static_cast<std::uint32_t>(*it), kFalse, r);
    }
    return wrap(r);
}

Bdd Manager::cube(const Cube& literals) {
    Cube sorted = literals;
    std::sort(sorted.begin(), sorted.end());
    std::uint32_t r = kTrue;
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
        if (it->first < 0 || it->first >= var_count())
            throw std::out_of_range("BDD variable index out of range");
        auto v = static_cast<std::uint32_t>(it->first);
        r = it->second ? mk(v, kFalse, r) : mk(v, r, kFalse);
    }
    return wrap(r);
}

// ---------------------------------------------------------------------------
// Boolean combinators

Bdd Manager::apply(Op op, const Bdd& f, const Bdd& g) {
    check_owner(f);
    check_owner(g);
    maybe_collect();
    return wrap(apply_rec(op, f.id_, g.id_));
}

Bdd Manager::negate(const Bdd& f) {
    check_owner(f);
    maybe_collect();
    return wrap(not_rec(f.id_));
}

std::uint32_t Manager::not_rec(std::uint32_t f) {
    if (f == kFalse) return kTrue;
    if (f == kTrue) return kFalse;
    std::uint32_t r;
    if (cache_lookup(kOpNot, f, 0, 0, r)) return r;
    tick();
    const Node n = nodes_[f];
    std::uint32_t lo = not_rec(n.lo);
    std::uint32_t hi = not_rec(n.hi);
    r = mk(n.var, lo, hi);
    cache_store(kOpNot, f, 0, 0, r);
    return r;
}

std::uint32_t Manager::apply_rec(Op op, std::uint32_t f, std::uint32_t g) {
    switch (op) {
        case Op::And:
            if (f == kFalse || g == kFalse) return kFalse;
            if (f == kTrue) return g;
            if (g == kTrue || f == g) return f;
            break;
        case Op::Or:
            if (f == kTrue || g == kTrue) return kTrue;
            if (f == kFalse) return g;
            if (g == kFalse || f == g) return f;
            break;
        case Op::Xor:
            if (f == g) return kFalse;
            if (f == kFalse) return g;
            if (g == kFalse) return f;
            if (f == kTrue) return not_rec(g);
            if (g == kTrue) return not_rec(f);
            break;
        case Op::Implies:
            if (f == kFalse || g == kTrue || f == g) return kTrue;
            if (f == kTrue) return g;
            if (g == kFalse) return not_rec(f);
            break;
        case Op::Iff:
            if (f == g) return kTrue;
            if (f == kTrue) return g;
            if (g == kTrue) return f;
            if (f == kFalse) return not_rec(g);
            if (g == kFalse) return not_rec(f);
            break;
        case Op::Diff:
            if (f == kFalse || g == kTrue || f == g) return kFalse;
            if (g == kFalse) return f;
            if (f == kTrue) return not_rec(g);
            break;
    }
    if (commutative(op) && f > g) std::swap(f, g);
    auto code = static_cast<std::uint32_t>(op);
    std::uint32_t r;
    if (cache_lookup(code, f, g, 0, r)) return r;
    tick();
    const Node nf = nodes_[f];
    const Node ng = nodes_[g];
    std::uint32_t v = std::min(nf.var, ng.var);
    std::uint32_t f0 = nf.var == v ? nf.lo : f, f1 = nf.var == v ? nf.hi : f;
    std::uint32_t g0 = ng.var == v ? ng.lo : g, g1 = ng.var == v ? ng.hi : g;
    std::uint32_t lo = apply_rec(op, f0, g0);
    std::uint32_t hi = apply_rec(op, f1, g1);
    r = mk(v, lo, hi);
    cache_store(code, f, g, 0, r);
    return r;
}

// ---------------------------------------------------------------------------
// Quantification and substitution

Bdd Manager::quantify(Quantifier q, const VarSet& vars, const Bdd& f) {
    check_owner(f);
    maybe_collect();
    Bdd c = cube_of(vars);
    if (q == Quantifier::Exists) return wrap(exists_rec(f.id_, c.id_));
    Bdd nf = wrap(not_rec(f.id_));
    return wrap(not_rec(exists_rec(nf.id_, c.id_)));
}

std::uint32_t Manager::exists_rec(std::uint32_t f, std::uint32_t cube) {
    if (f <= kTrue) return f;
    const std::uint32_t fv = nodes_[f].var;
    while (cube != kTrue && nodes_[cube].var < fv) cube = nodes_[cube].hi;
    if (cube == kTrue) return f;
    std::uint32_t r;
    if (cache_lookup(kOpExists, f, cube, 0, r)) return r;
    tick();
    const Node n = nodes_[f];
    if (nodes_[cube].var == n.var) {
        std::uint32_t rest = nodes_[cube].hi;
        std::uint32_t lo = exists_rec(n.lo, rest);
        if (lo == kTrue) {
            r = kTrue;
        } else {
            std::uint32_t hi = exists_rec(n.hi, rest);
            r = apply_rec(Op::Or, lo, hi);
        }
    } else {
        std::uint32_t lo = exists_rec(n.lo, cube);
        std::uint32_t hi = exists_rec(n.hi, cube);
        r = mk(n.var, lo, hi);
    }
    cache_store(kOpExists, f, cube, 0, r);
    return r;
}

Bdd Manager::and_exists(const Bdd& f, const Bdd& g, const VarSet& vars) {
    check_owner(f);
    check_owner(g);
    maybe_collect();
    Bdd c = cube_of(vars);
    return wrap(and_exists_rec(f.id_, g.id_, c.id_));
}

std::uint32_t Manager::and_exists_rec(std::uint32_t f, std::uint32_t g, std::uint32_t cube) {
    if (f == kFalse || g == kFalse) return kFalse;
    if (f == kTrue && g == kTrue) return kTrue;
    if (f == kTrue || f == g) return exists_rec(g, cube);
    if (g == kTrue) return exists_rec(f, cube);
    if (cube == kTrue) return apply_rec(Op::And, f, g);
    if (f > g) std::swap(f, g);
    const Node nf = nodes_[f];
    const Node ng = nodes_[g];
    std::uint32_t v = std::min(nf.var, ng.var);
    while (cube != kTrue && nodes_[cube].var < v) cube = nodes_[cube].hi;
    if (cube == kTrue) return apply_rec(Op::And, f, g);
    std::uint32_t r;
    if (cache_lookup(kOpAndExists, f, g, cube, r)) return r;
    tick();
    std::uint32_t f0 = nf.var == v ? nf.lo : f, f1 = nf.var == v ? nf.hi : f;
    std::uint32_t g0 = ng.var == v ? ng.lo : g, g1 = ng.var == v ? ng.hi : g;
    if (nodes_[cube].var == v) {
        std::uint32_t rest = nodes_[cube].hi;
        std::uint32_t lo = and_exists_rec(f0, g0, rest);
        if (lo == kTrue) {
            r = kTrue;
        } else {
            std::uint32_t hi = and_exists_rec(f1, g1, rest);
            r = apply_rec(Op::Or, lo, hi);
        }
    } else {
        std::uint32_t lo = and_exists_rec(f0, g0, cube);
        std::uint32_t hi = and_exists_rec(f1, g1, cube);
        r = mk(v, lo, hi);
    }
    cache_store(kOpAndExists, f, g, cube, r);
    return r;
}

Bdd Manager::rename(const Bdd& f, Register direction) {
    check_owner(f);
    maybe_collect();
    return wrap(rename_rec(f.id_, direction));
}

std::uint32_t Manager::rename_rec(std::uint32_t f, Register direction) {
    if (f <= kTrue) return f;
    const std::uint32_t code = direction == Register::Prime ? kOpPrime : kOpUnprime;
    std::uint32_t r;
    if (cache_lookup(code, f, 0, 0, r)) return r;
    tick();
    const Node n = nodes_[f];
    const bool primed = is_primed_var(static_cast<int>(n.var));
    if (direction == Register::Prime && primed) {
        throw std::invalid_argument("prime: function already mentions primed variable " +
                                    var_name(static_cast<int>(n.var)));
    }
    if (direction == Register::Unprime && !primed) {
        throw std::invalid_argument("unprime: function mentions unprimed variable " +
                                    var_name(static_cast<int>(n.var)));
    }
    std::uint32_t lo = rename_rec(n.lo, direction);
    std::uint32_t hi = rename_rec(n.hi, direction);
    r = mk(direction == Register::Prime ? n.var + 1 : n.var - 1, lo, hi);
    cache_store(code, f, 0, 0, r);
    return r;
}

Bdd Manager::restrict(const Bdd& f, const Cube& assignment) {
    check_owner(f);
    maybe_collect();
    Bdd c = cube(assignment);
    return wrap(restrict_rec(f.id_, c.id_));
}

std::uint32_t Manager::restrict_rec(std::uint32_t f, std::uint32_t cube) {
    if (f <= kTrue) return f;
    const std::uint32_t fv = nodes_[f].var;
    auto rest_of = [&](std::uint32_t c) {
        return nodes_[c].lo == kFalse ? nodes_[c].hi : nodes_[c].lo;
    };
    while (cube != kTrue && nodes_[cube].var < fv) cube = rest_of(cube);
    if (cube == kTrue) return f;
    std::uint32_t r;
    if (cache_lookup(kOpRestrict, f, cube, 0, r)) return r;
    tick();
    const Node n = nodes_[f];
    if (nodes_[cube].var == n.var) {
        bool positive = nodes_[cube].lo == kFalse;
        r = restrict_rec(positive ? n.hi : n.lo, rest_of(cube));
    } else {
        std::uint32_t lo = restrict_rec(n.lo, cube);
        std::uint32_t hi = restrict_rec(n.hi, cube);
        r = mk(n.var, lo, hi);
    }
    cache_store(kOpRestrict, f, cube, 0, r);
    return r;
}

// ---------------------------------------------------------------------------
// Inspection

VarSet Manager::support(const Bdd& f) {
    check_owner(f);
    std::unordered_set<std::uint32_t> seen;
    std::vector<char> present(static_cast<std::size_t>(var_count()), 0);
    std::vector<std::uint32_t> stack{f.id_};
    while (!stack.empty()) {
        std::uint32_t n = stack.back();
        stack.pop_back();
        if (n <= kTrue || !seen.insert(n).second) continue;
        present[nodes_[n].var] = 1;
        stack.push_back(nodes_[n].lo);
        stack.push_back(nodes_[n].hi);
    }
    VarSet out;
    for (int v = 0; v < var_count(); ++v) {
        if (present[static_cast<std::size_t>(v)]) out.push_back(v);
    }
    return out;
}

BigInt Manager::count_models(const Bdd& f, const VarSet& vars) {
    check_owner(f);
    VarSet sorted = vars;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> position(static_cast<std::size_t>(var_count()), -1);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        position.at(static_cast<std::size_t>(sorted[i])) = static_cast<int>(i);
    }
    const int n = static_cast<int>(sorted.size());
    auto level = [&](std::uint32_t node) -> int {
        if (node <= kTrue) return n;
        int p = position[nodes_[node].var];
        if (p < 0) {
            throw std::invalid_argument("count_models: support escapes the variable set (" +
                                        var_name(static_cast<int>(nodes_[node].var)) + ")");
        }
        return p;
    };
    std::unordered_map<std::uint32_t, BigInt> memo;
    // Models over the variables at positions >= level(node).
    auto count = [&](auto&& self, std::uint32_t node) -> BigInt {
        if (node == kFalse) return 0;
        if (node == kTrue) return 1;
        auto it = memo.find(node);
        if (it != memo.end()) return it->second;
        const int l = level(node);
        const Node nd = nodes_[node];
        BigInt lo = self(self, nd.lo) << (level(nd.lo) - l - 1);
        BigInt hi = self(self, nd.hi) << (level(nd.hi) - l - 1);
        BigInt r = lo + hi;
        memo.emplace(node, r);
        return r;
    };
    return count(count, f.id_) << level(f.id_);
}

bool Manager::eval(const Bdd& f, const std::vector<bool>& assignment) const {
    check_owner(f);
    std::uint32_t n = f.id_;
    while (n > kTrue) {
        const Node& nd = nodes_[n];
        n = assignment.at(nd.var) ? nd.hi : nd.lo;
    }
    return n == kTrue;
}

std::optional<Cube> Manager::min_assignment(const Bdd& f, const VarSet& vars) {
    check_owner(f);
    if (f.is_false()) return std::nullopt;
    VarSet sorted = vars;
    std::sort(sorted.begin(), sorted.end());
    Cube out;
    std::uint32_t n = f.id_;
    for (int v : sorted) {
        bool value = false;
        if (n > kTrue && nodes_[n].var == static_cast<std::uint32_t>(v)) {
            if (nodes_[n].lo != kFalse) {
                n = nodes_[n].lo;
            } else {
                n = nodes_[n].hi;
                value = true;
            }
        } else if (n > kTrue && nodes_[n].var < static_cast<std::uint32_t>(v)) {
            throw std::invalid_argument("min_assignment: support escapes the variable set");
        }
        out.emplace_back(v, value);
    }
    if (n != kTrue) throw std::invalid_argument("min_assignment: support escapes the variable set");
    return out;
}

void Manager::write_dot(std::ostream& out, const Bdd& f) const {
    check_owner(f);
    out << "digraph bdd {\n";
    out << "  n0 [shape=box,label=\"0\"];\n  n1 [shape=box,label=\"1\"];\n";
    std::unordered_set<std::uint32_t> seen;
    std::vector<std::uint32_t> stack{f.id_};
    std::vector<std::uint32_t> order;
    while (!stack.empty()) {
        std::uint32_t n = stack.back();
        stack.pop_back();
        if (n <= kTrue || !seen.insert(n).second) continue;
        order.push_back(n);
        stack.push_back(nodes_[n].hi);
        stack.push_back(nodes_[n].lo);
    }
    std::sort(order.begin(), order.end());
    for (std::uint32_t n : order) {
        const Node& nd = nodes_[n];
        out << "  n" << n << " [label=\"" << var_name(static_cast<int>(nd.var)) << "\"];\n";
        out << "  n" << n << " -> n" << nd.hi << ";\n";
        out << "  n" << n << " -> n" << nd.lo << " [style=dashed];\n";
    }
    out << "}\n";
}

}  // namespace gr1::bdd

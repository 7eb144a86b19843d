#pragma once

// Reduced ordered binary decision diagrams.
//
// Every proposition owns two adjacent variable slots: the unprimed (current)
// copy at index 2p and the primed (next) copy at 2p + 1. The variable order
// is the slot order and never changes. There are no complement edges, so two
// handles denote the same function iff their node ids are equal.

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gr1/errors.hpp"

namespace gr1::bdd {

class Manager;

using BigInt = boost::multiprecision::cpp_int;

/// Sorted list of BDD variable indices.
using VarSet = std::vector<int>;

/// A partial assignment; unmentioned variables are don't-care.
/// Entries are sorted by variable index.
using Cube = std::vector<std::pair<int, bool>>;

inline constexpr int unprimed_var(int prop) { return 2 * prop; }
inline constexpr int primed_var(int prop) { return 2 * prop + 1; }
inline constexpr bool is_primed_var(int var) { return (var & 1) != 0; }

/// Counted reference to a node of one manager.
class Bdd {
public:
    Bdd() = default;
    Bdd(const Bdd& other);
    Bdd(Bdd&& other) noexcept;
    Bdd& operator=(const Bdd& other);
    Bdd& operator=(Bdd&& other) noexcept;
    ~Bdd();

    Manager* manager() const { return mgr_; }
    std::uint32_t id() const { return id_; }
    bool valid() const { return mgr_ != nullptr; }

    bool is_true() const;
    bool is_false() const;
    bool is_constant() const { return is_true() || is_false(); }

    /// Top variable; only meaningful for non-constant nodes.
    int var() const;
    Bdd low() const;
    Bdd high() const;

    Bdd operator!() const;
    Bdd operator&(const Bdd& g) const;
    Bdd operator|(const Bdd& g) const;
    Bdd operator^(const Bdd& g) const;
    Bdd& operator&=(const Bdd& g) { return *this = *this & g; }
    Bdd& operator|=(const Bdd& g) { return *this = *this | g; }
    Bdd implies(const Bdd& g) const;
    Bdd iff(const Bdd& g) const;
    Bdd diff(const Bdd& g) const;

    bool operator==(const Bdd& g) const { return mgr_ == g.mgr_ && id_ == g.id_; }
    bool operator!=(const Bdd& g) const { return !(*this == g); }

private:
    friend class Manager;
    Bdd(Manager* mgr, std::uint32_t id);

    Manager* mgr_ = nullptr;
    std::uint32_t id_ = 0;
};

enum class Op : std::uint8_t { And, Or, Xor, Implies, Iff, Diff };
enum class Quantifier : std::uint8_t { Exists, Forall };
enum class Register : std::uint8_t { Prime, Unprime };

struct ManagerOptions {
    std::size_t gc_threshold = 1u << 20;
    /// Hard cap on live nodes; 0 means unlimited.
    std::size_t node_budget = 0;
    /// Operations abort with ResourceLimit once this point is passed.
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

class PrimeCubeEnumerator;

class Manager {
public:
    explicit Manager(ManagerOptions options = {});
    Manager(const Manager&) = delete;
    Manager& operator=(const Manager&) = delete;
    ~Manager();

    /// Allocates the unprimed/primed slot pair of a new proposition and
    /// returns the proposition index.
    int new_proposition(std::string name);
    int proposition_count() const { return static_cast<int>(names_.size()); }
    int var_count() const { return 2 * proposition_count(); }
    std::string var_name(int var) const;

    Bdd bdd_true();
    Bdd bdd_false();
    Bdd var(int v);
    Bdd nvar(int v);
    /// Conjunction of the positive literals of vars.
    Bdd cube_of(const VarSet& vars);
    Bdd cube(const Cube& literals);

    Bdd apply(Op op, const Bdd& f, const Bdd& g);
    Bdd negate(const Bdd& f);
    Bdd quantify(Quantifier q, const VarSet& vars, const Bdd& f);
    Bdd exists(const VarSet& vars, const Bdd& f) { return quantify(Quantifier::Exists, vars, f); }
    Bdd forall(const VarSet& vars, const Bdd& f) { return quantify(Quantifier::Forall, vars, f); }
    /// exists vars . (f & g) without building the conjunction.
    Bdd and_exists(const Bdd& f, const Bdd& g, const VarSet& vars);
    Bdd rename(const Bdd& f, Register direction);
    Bdd prime(const Bdd& f) { return rename(f, Register::Prime); }
    Bdd unprime(const Bdd& f) { return rename(f, Register::Unprime); }
    Bdd restrict(const Bdd& f, const Cube& assignment);

    /// Sorted variable indices f depends on.
    VarSet support(const Bdd& f);
    BigInt count_models(const Bdd& f, const VarSet& vars);
    bool eval(const Bdd& f, const std::vector<bool>& assignment) const;
    /// Lexicographically smallest satisfying total assignment over vars
    /// (false < true, in variable order); nullopt for FALSE.
    std::optional<Cube> min_assignment(const Bdd& f, const VarSet& vars);

    PrimeCubeEnumerator prime_cubes(const Bdd& f, const VarSet& vars);

    void write_dot(std::ostream& out, const Bdd& f) const;

    std::size_t live_nodes() const { return nodes_.size() - free_.size(); }
    std::size_t peak_nodes() const { return peak_; }
    void collect_garbage();
    void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) {
        options_.deadline = deadline;
    }
    void set_node_budget(std::size_t budget) { options_.node_budget = budget; }

private:
    friend class Bdd;
    friend class PrimeCubeEnumerator;

    struct Node {
        std::uint32_t var;
        std::uint32_t lo;
        std::uint32_t hi;
    };
    struct CacheEntry {
        std::uint32_t op = UINT32_MAX;
        std::uint32_t a = 0, b = 0, c = 0;
        std::uint32_t result = 0;
    };

    static constexpr std::uint32_t kFalse = 0;
    static constexpr std::uint32_t kTrue = 1;
    static constexpr std::uint32_t kTerminalVar = UINT32_MAX;

    Bdd wrap(std::uint32_t id) { return Bdd(this, id); }
    void check_owner(const Bdd& f) const;
    void maybe_collect();
    void tick();

    std::uint32_t mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi);
    std::uint32_t top(std::uint32_t n) const { return nodes_[n].var; }

    std::uint32_t apply_rec(Op op, std::uint32_t f, std::uint32_t g);
    std::uint32_t not_rec(std::uint32_t f);
    std::uint32_t exists_rec(std::uint32_t f, std::uint32_t cube);
    std::uint32_t and_exists_rec(std::uint32_t f, std::uint32_t g, std::uint32_t cube);
    std::uint32_t rename_rec(std::uint32_t f, Register direction);
    std::uint32_t restrict_rec(std::uint32_t f, std::uint32_t cube);

    bool cache_lookup(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                      std::uint32_t& result) const;
    void cache_store(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                     std::uint32_t result);

    void ref(std::uint32_t id);
    void deref(std::uint32_t id);

    ManagerOptions options_;
    std::vector<std::string> names_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> ext_refs_;
    std::vector<std::uint32_t> free_;
    std::vector<std::uint32_t> buckets_;
    std::vector<std::uint32_t> chain_;
    std::vector<CacheEntry> cache_;
    std::size_t gc_threshold_;
    std::size_t peak_ = 0;
    std::uint64_t ticks_ = 0;
};

/// Lazily enumerates the prime implicants of a function, fewest literals
/// first, using the Coudert-Madre meta-product representation of the set of
/// primes. Within one literal count the order is depth-first over the
/// variable order with don't-care before negative before positive.
class PrimeCubeEnumerator {
public:
    std::optional<Cube> next();

private:
    friend class Manager;
    struct Frame {
        std::uint32_t node;
        int level;
        int next_choice;
        int literals;
        int choice_in;
    };

    PrimeCubeEnumerator(std::shared_ptr<Manager> meta, Bdd primes, VarSet vars);

    int min_literals(std::uint32_t node, int level);
    int max_literals(std::uint32_t node, int level);
    std::uint32_t child(std::uint32_t node, int level, int choice);
    void start_level();

    std::shared_ptr<Manager> meta_;
    Bdd primes_;
    VarSet vars_;
    int target_ = 0;
    std::vector<Frame> stack_;
    std::unordered_map<std::uint64_t, int> min_memo_;
    std::unordered_map<std::uint64_t, int> max_memo_;
    bool done_ = false;
};

}  // namespace gr1::bdd

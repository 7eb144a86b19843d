#pragma once

// Textual GR(1) specifications: declarations, expression trees and the six
// part lists (init/safety/liveness for assumptions and guarantees).

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gr1/errors.hpp"

namespace gr1 {

enum class VarKind { Input, Output };

struct VarDecl {
    std::string name;
    VarKind kind = VarKind::Input;
    bool is_integer = false;
    long lo = 0;
    long hi = 1;
    int line = 0;
};

enum class ExprKind { Atom, IntConst, BoolConst, Not, And, Or, Implies, Iff, Next, Compare, Add, Sub };
enum class CmpOp { Lt, Le, Eq, Ge, Gt, Ne };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind = ExprKind::BoolConst;
    std::string name;  // Atom
    long value = 0;    // IntConst; BoolConst uses 0/1
    CmpOp cmp = CmpOp::Eq;
    std::vector<ExprPtr> children;
    int line = 0;
    int column = 0;
};

enum class PartKind { EnvInit, EnvTrans, EnvLiveness, SysInit, SysTrans, SysLiveness };
inline constexpr std::array<PartKind, 6> kAllPartKinds{PartKind::EnvInit,     PartKind::EnvTrans,
                                                       PartKind::EnvLiveness, PartKind::SysInit,
                                                       PartKind::SysTrans,    PartKind::SysLiveness};

inline constexpr int part_slot(PartKind k) { return static_cast<int>(k); }
inline constexpr bool is_assumption(PartKind k) { return part_slot(k) < 3; }
/// Section header name without brackets, e.g. "ENV_TRANS".
std::string_view section_name(PartKind k);

struct SpecPart {
    PartKind kind = PartKind::EnvInit;
    int index = 0;  // position within its list
    ExprPtr expr;
    std::string text;  // verbatim source, comment and surrounding blanks removed
    int line = 0;
};

struct SpecDocument {
    std::vector<VarDecl> vars;
    std::array<std::vector<SpecPart>, 6> parts;

    const VarDecl* find(std::string_view name) const;
    std::vector<SpecPart>& list(PartKind k) { return parts[static_cast<std::size_t>(part_slot(k))]; }
    const std::vector<SpecPart>& list(PartKind k) const {
        return parts[static_cast<std::size_t>(part_slot(k))];
    }
    /// Appends a part, assigning its index.
    void add_part(PartKind k, ExprPtr expr, std::string text);
};

/// Throws SpecError with 1-based line/column on malformed input.
SpecDocument parse_spec(std::string_view text);
/// Parses a single expression against the declarations of doc.
ExprPtr parse_expression(const SpecDocument& doc, std::string_view text);

struct ShapeViolation {
    PartKind kind;
    int index;
    std::string rule;
};

/// Rules: "next in init part", "nested next", "output in initial assumption",
/// "output under next in assumption".
std::vector<ShapeViolation> validate_gr1_shape(const SpecDocument& doc);

std::string to_string(const Expr& e);
/// Re-parseable text of the whole document.
std::string print_spec(const SpecDocument& doc);
/// Equality ignoring source positions.
bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const SpecDocument& a, const SpecDocument& b);

// Expression builders, used by transformations that add parts.
ExprPtr make_atom(std::string name);
ExprPtr make_bool(bool value);
ExprPtr make_int(long value);
ExprPtr make_unary(ExprKind kind, ExprPtr a);
ExprPtr make_binary(ExprKind kind, ExprPtr a, ExprPtr b);
ExprPtr make_compare(CmpOp op, ExprPtr a, ExprPtr b);

}  // namespace gr1

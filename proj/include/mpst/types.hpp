#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mpst {

/// Payload sort carried by a message label. An empty name is the unit
/// payload, written by omitting the parenthesised sort entirely.
struct Sort {
    std::string name;

    bool is_unit() const { return name.empty(); }
    friend bool operator==(const Sort&, const Sort&) = default;
    friend auto operator<=>(const Sort&, const Sort&) = default;
};

/// Coercion table between sorts. Reflexive coercions always hold; anything
/// else must be registered explicitly. The unit sort coerces only to unit.
class SortTable {
public:
    void allow(std::string from, std::string to) {
        allowed_.emplace(std::move(from), std::move(to));
    }

    bool coercible(const Sort& from, const Sort& to) const {
        if (from == to) return true;
        if (from.is_unit() || to.is_unit()) return false;
        return allowed_.count({from.name, to.name}) > 0;
    }

private:
    std::set<std::pair<std::string, std::string>> allowed_;
};

struct Role {
    std::string name;

    friend bool operator==(const Role&, const Role&) = default;
    friend auto operator<=>(const Role&, const Role&) = default;
};

enum class Dir { Send, Receive };

/// A single communication action, rendered `peer!label(sort)` for sends and
/// `peer?label(sort)` for receives. The canonical rendering is shared by the
/// DOT format, derivation traces and error messages.
struct Action {
    Dir dir = Dir::Send;
    Role peer;
    std::string label;
    Sort sort;

    std::string to_string() const;
    friend bool operator==(const Action&, const Action&) = default;
    friend auto operator<=>(const Action&, const Action&) = default;
};

/// Direction + peer component of an action; the codomain of `act`.
struct ActKey {
    Dir dir = Dir::Send;
    Role peer;

    std::string to_string() const;
    friend bool operator==(const ActKey&, const ActKey&) = default;
    friend auto operator<=>(const ActKey&, const ActKey&) = default;
};

std::set<ActKey> act(const std::vector<Action>& actions);

class LocalType;
class GlobalType;
using LocalRef = std::shared_ptr<const LocalType>;
using GlobalRef = std::shared_ptr<const GlobalType>;

struct LocalChoice {
    std::string label;
    Sort sort;
    LocalRef cont;
};

/// A participant's behaviour: internal choice (Select), external choice
/// (Branch), recursion and termination. Branch order is preserved as written
/// so renderings and traces stay deterministic; semantic operations key
/// branches by label.
class LocalType {
public:
    enum class Kind { End, Select, Branch, Rec, Var };

    Kind kind = Kind::End;
    Role peer;                        // Select/Branch
    std::vector<LocalChoice> choices; // Select/Branch, labels pairwise distinct
    std::string var;                  // Rec/Var
    LocalRef body;                    // Rec

    static LocalRef make_end();
    static LocalRef make_select(Role peer, std::vector<LocalChoice> choices);
    static LocalRef make_branch(Role peer, std::vector<LocalChoice> choices);
    static LocalRef make_rec(std::string var, LocalRef body);
    static LocalRef make_var(std::string name);
};

struct GlobalChoice {
    std::string label;
    Sort sort;
    GlobalRef cont;
};

/// The whole protocol: labelled message exchanges with branching, recursion
/// and termination.
class GlobalType {
public:
    enum class Kind { End, Msg, Rec, Var };

    Kind kind = Kind::End;
    Role from, to;                     // Msg, from != to
    std::vector<GlobalChoice> choices; // Msg
    std::string var;                   // Rec/Var
    GlobalRef body;                    // Rec

    static GlobalRef make_end();
    static GlobalRef make_msg(Role from, Role to, std::vector<GlobalChoice> choices);
    static GlobalRef make_rec(std::string var, GlobalRef body);
    static GlobalRef make_var(std::string name);
};

bool structural_equal(const LocalRef& a, const LocalRef& b);
bool structural_equal(const GlobalRef& a, const GlobalRef& b);

/// Checks label distinctness, closedness, contractivity and (for globals)
/// from != to. Returns a description of the first violation found.
std::optional<std::string> well_formed_violation(const LocalRef& type);
std::optional<std::string> well_formed_violation(const GlobalRef& type);

/// True iff the role occurs as a sender or receiver anywhere in the type.
bool occurs(const GlobalRef& type, const Role& role);

/// Capture-free substitution of `var` by `replacement`.
LocalRef substitute(const LocalRef& type, const std::string& var, const LocalRef& replacement);

/// Unrolls top-level recursion until the head is End/Select/Branch.
LocalRef unfold(LocalRef type);

}  // namespace mpst

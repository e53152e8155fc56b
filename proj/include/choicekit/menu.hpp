#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "choicekit/outcome.hpp"

namespace choicekit {

/// Action label: an atomic string or an ordered pair of action ids. Pair
/// children are shared, so the ids of an n-fold product menu cost O(1) each.
///
/// Serialization is "(" left "," right ")"; atomic labels may not contain
/// parentheses or commas, which keeps the encoding injective.
class ActionId {
 public:
  explicit ActionId(std::string label);
  static ActionId pair(const ActionId& first, const ActionId& second);
  /// Inverse of str(). Throws InputError on malformed text.
  static ActionId parse(std::string_view text);

  bool is_pair() const;
  const std::string& label() const;  // atomic ids only
  const ActionId& first() const;     // pairs only
  const ActionId& second() const;    // pairs only

  std::string str() const;
  /// Structural 64-bit hash, computed once at construction.
  std::uint64_t hash() const;

  friend bool operator==(const ActionId& a, const ActionId& b);
  friend bool operator!=(const ActionId& a, const ActionId& b) { return !(a == b); }

 private:
  struct Node;
  explicit ActionId(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  void append_to(std::string& out) const;

  std::shared_ptr<const Node> node_;
};

struct MenuEntry {
  ActionId action;
  Outcome outcome;
};

/// A finite menu (A, o): at least one entry, distinct action ids, every
/// outcome in `space`. Entries keep insertion order.
class Menu {
 public:
  Menu(OutcomeSpace space, std::vector<MenuEntry> entries);

  const OutcomeSpace& space() const { return *space_; }
  std::span<const MenuEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const MenuEntry& operator[](std::size_t i) const { return entries_[i]; }
  std::optional<std::size_t> index_of(const ActionId& action) const;

  /// Convenience for scalar menus: {label_i: value_i}.
  static Menu scalar(std::initializer_list<std::pair<std::string, double>> entries);

 private:
  struct Trusted {};
  Menu(Trusted, std::shared_ptr<const OutcomeSpace> space, std::vector<MenuEntry> entries)
      : space_(std::move(space)), entries_(std::move(entries)) {}
  friend Menu product(const Menu&, const Menu&);

  std::shared_ptr<const OutcomeSpace> space_;
  std::vector<MenuEntry> entries_;
};

/// Probabilities over a menu's actions, aligned with the menu's entry order.
class ChoiceDistribution {
 public:
  /// Rejects negative values and totals further than 1e-12 from one.
  ChoiceDistribution(std::vector<ActionId> actions, std::vector<double> probs);

  std::size_t size() const { return probs_.size(); }
  const std::vector<ActionId>& actions() const { return actions_; }
  const std::vector<double>& probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }
  /// Throws InputError for an unknown action.
  double at(const ActionId& action) const;

 private:
  std::vector<ActionId> actions_;
  std::vector<double> probs_;
};

/// (A1, o1) ⊗ (A2, o2): actions (a1, a2) ordered by (index in m1, index in m2),
/// outcomes o1(a1) * o2(a2).
Menu product(const Menu& m1, const Menu& m2);

/// Left-associated n-fold product ((m ⊗ m) ⊗ m) ... ; n = 1 returns m.
Menu power(const Menu& m, int n);

/// Index in power(m, n) of the diagonal action (a_i, ..., a_i).
std::size_t diagonal_index(std::size_t menu_size, std::size_t action_index, int n);

/// A relabeling between equivalent menus: element i is the index in m2 matched
/// to entry i of m1. Absent when no bijection matches outcomes within `tol`.
/// A negative tol selects the space default (exact for prize streams, 1e-9
/// otherwise).
std::optional<std::vector<std::size_t>> equivalent(const Menu& m1, const Menu& m2, double tol = -1.0);

/// The unit binary menu {b0: 0, b1: 1}.
Menu unit_binary_menu();

}  // namespace choicekit

#include "choicekit/menu.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>
#include <variant>

#include "choicekit/hash.hpp"

namespace choicekit {

struct ActionId::Node {
  std::variant<std::string, std::pair<ActionId, ActionId>> body;
  std::uint64_t hash = 0;
};

ActionId::ActionId(std::string label) {
  if (label.empty()) throw InputError("action label must be nonempty");
  if (label.find_first_of("(),") != std::string::npos)
    throw InputError("action label may not contain '(', ')' or ',': " + label);
  auto node = std::make_shared<Node>();
  node->hash = splitmix64(fnv1a(label));
  node->body = std::move(label);
  node_ = std::move(node);
}

ActionId ActionId::pair(const ActionId& first, const ActionId& second) {
  auto node = std::make_shared<Node>();
  node->hash = hash_combine(hash_combine(0x70616972ULL, first.hash()), second.hash());
  node->body = std::make_pair(first, second);
  return ActionId(std::shared_ptr<const Node>(std::move(node)));
}

namespace {

ActionId parse_at(std::string_view text, std::size_t& pos) {
  if (pos >= text.size()) throw InputError("truncated action id");
  if (text[pos] == '(') {
    ++pos;
    ActionId left = parse_at(text, pos);
    if (pos >= text.size() || text[pos] != ',') throw InputError("expected ',' in action id");
    ++pos;
    ActionId right = parse_at(text, pos);
    if (pos >= text.size() || text[pos] != ')') throw InputError("expected ')' in action id");
    ++pos;
    return ActionId::pair(left, right);
  }
  const std::size_t end = text.find_first_of("(),", pos);
  const std::size_t stop = end == std::string_view::npos ? text.size() : end;
  if (stop == pos) throw InputError("empty atomic action label");
  ActionId out{std::string(text.substr(pos, stop - pos))};
  pos = stop;
  return out;
}

}  // namespace

ActionId ActionId::parse(std::string_view text) {
  std::size_t pos = 0;
  ActionId out = parse_at(text, pos);
  if (pos != text.size()) throw InputError("trailing characters in action id: " + std::string(text));
  return out;
}

bool ActionId::is_pair() const { return node_->body.index() == 1; }

const std::string& ActionId::label() const { return std::get<std::string>(node_->body); }

const ActionId& ActionId::first() const {
  return std::get<std::pair<ActionId, ActionId>>(node_->body).first;
}

const ActionId& ActionId::second() const {
  return std::get<std::pair<ActionId, ActionId>>(node_->body).second;
}

void ActionId::append_to(std::string& out) const {
  if (!is_pair()) {
    out += label();
    return;
  }
  out += '(';
  first().append_to(out);
  out += ',';
  second().append_to(out);
  out += ')';
}

std::string ActionId::str() const {
  std::string out;
  append_to(out);
  return out;
}

std::uint64_t ActionId::hash() const { return node_->hash; }

bool operator==(const ActionId& a, const ActionId& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.is_pair() != b.is_pair()) return false;
  if (!a.is_pair()) return a.label() == b.label();
  return a.first() == b.first() && a.second() == b.second();
}

Menu::Menu(OutcomeSpace space, std::vector<MenuEntry> entries)
    : space_(std::make_shared<const OutcomeSpace>(std::move(space))), entries_(std::move(entries)) {
  if (entries_.empty()) throw InputError("menu must contain at least one action");
  std::unordered_set<std::string> seen;
  for (const auto& e : entries_) {
    if (!seen.insert(e.action.str()).second)
      throw InputError("duplicate action id in menu: " + e.action.str());
    if (!e.outcome.conforms_to(*space_))
      throw InputError("outcome of action " + e.action.str() + " is not in space " +
                       to_string(space_->kind));
  }
}

Menu Menu::scalar(std::initializer_list<std::pair<std::string, double>> entries) {
  std::vector<MenuEntry> out;
  for (const auto& [label, value] : entries) out.push_back({ActionId(label), Outcome::scalar(value)});
  return Menu(OutcomeSpace::real_scalar(), std::move(out));
}

std::optional<std::size_t> Menu::index_of(const ActionId& action) const {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].action == action) return i;
  return std::nullopt;
}

ChoiceDistribution::ChoiceDistribution(std::vector<ActionId> actions, std::vector<double> probs)
    : actions_(std::move(actions)), probs_(std::move(probs)) {
  if (actions_.size() != probs_.size()) throw InputError("choice distribution size mismatch");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw InputError("choice probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InputError("choice probabilities must sum to 1");
}

double ChoiceDistribution::at(const ActionId& action) const {
  for (std::size_t i = 0; i < actions_.size(); ++i)
    if (actions_[i] == action) return probs_[i];
  throw InputError("action not in distribution: " + action.str());
}

Menu product(const Menu& m1, const Menu& m2) {
  if (m1.space() != m2.space()) throw InputError("incompatible outcome spaces");
  std::vector<MenuEntry> entries;
  entries.reserve(m1.size() * m2.size());
  for (const auto& a : m1.entries())
    for (const auto& b : m2.entries())
      entries.push_back({ActionId::pair(a.action, b.action), compose(a.outcome, b.outcome)});
  return Menu(Menu::Trusted{}, m1.space_, std::move(entries));
}

Menu power(const Menu& m, int n) {
  if (n < 1) throw InputError("menu power requires n >= 1");
  Menu out = m;
  for (int i = 1; i < n; ++i) out = product(out, m);
  return out;
}

std::size_t diagonal_index(std::size_t menu_size, std::size_t action_index, int n) {
  // In ((m ⊗ m) ⊗ m)..., the entry of (i1, ..., in) sits at sum_j i_j * k^(n-j).
  std::size_t repunit = 0;
  for (int j = 0; j < n; ++j) repunit = repunit * menu_size + 1;
  return action_index * repunit;
}

std::optional<std::vector<std::size_t>> equivalent(const Menu& m1, const Menu& m2, double tol) {
  if (m1.size() != m2.size() || m1.space() != m2.space()) return std::nullopt;
  if (tol < 0.0) tol = default_equality_tol(m1.space().kind);
  const std::size_t n = m1.size();

  auto sorted_order = [](const Menu& m) {
    std::vector<std::size_t> idx(m.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return compare(m[a].outcome, m[b].outcome) < 0;
    });
    return idx;
  };
  const auto o1 = sorted_order(m1);
  const auto o2 = sorted_order(m2);
  std::vector<std::size_t> mapping(n);
  bool sorted_ok = true;
  for (std::size_t i = 0; i < n && sorted_ok; ++i) {
    sorted_ok = approx_equal(m1[o1[i]].outcome, m2[o2[i]].outcome, tol);
    mapping[o1[i]] = o2[i];
  }
  if (sorted_ok) return mapping;

  // Tolerance can reorder near-ties; fall back to first-fit matching.
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    bool found = false;
    for (std::size_t j = 0; j < n && !found; ++j) {
      if (!used[j] && approx_equal(m1[i].outcome, m2[j].outcome, tol)) {
        used[j] = true;
        mapping[i] = j;
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  return mapping;
}

Menu unit_binary_menu() { return Menu::scalar({{"b0", 0.0}, {"b1", 1.0}}); }

}  // namespace choicekit

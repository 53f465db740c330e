// Copyright 2026 The stlforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stlforge/ast.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "stlforge/ast_json.hpp"
#include "stlforge/vocabulary.hpp"

namespace stlforge {

std::string_view to_string(SchemaErrc kind) noexcept {
  switch (kind) {
    case SchemaErrc::Json: return "Json";
    case SchemaErrc::MissingField: return "MissingField";
    case SchemaErrc::BadArity: return "BadArity";
    case SchemaErrc::BadInterval: return "BadInterval";
    case SchemaErrc::BadPredicate: return "BadPredicate";
  }
  return "Unknown";
}

std::string_view to_string(EvalErrc kind) noexcept {
  switch (kind) {
    case EvalErrc::UnknownSignal: return "UnknownSignal";
    case EvalErrc::IndexOutOfRange: return "IndexOutOfRange";
    case EvalErrc::BadTrace: return "BadTrace";
  }
  return "Unknown";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s.front());
  if (!std::isalpha(head) && head != '_') return false;
  return std::all_of(s.begin() + 1, s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

[[noreturn]] void bad_predicate(std::string_view text, std::size_t pos,
                                std::string_view why) {
  std::ostringstream msg;
  msg << "bad predicate '" << text << "' at position " << pos << ": " << why;
  throw SchemaError(SchemaErrc::BadPredicate, msg.str());
}

[[noreturn]] void arity(std::string_view why) {
  throw SchemaError(SchemaErrc::BadArity, std::string(why));
}

double clean_zero(double v) { return v == 0.0 ? 0.0 : v; }

}  // namespace

// ---------------------------------------------------------------------------
// Operators and comparators

std::string_view op_name(Op op) noexcept {
  switch (op) {
    case Op::Globally: return "Globally";
    case Op::Finally: return "Finally";
    case Op::Until: return "Until";
    case Op::Since: return "Since";
    case Op::Historically: return "Historically";
    case Op::Once: return "Once";
    case Op::Rise: return "Rise";
    case Op::Fall: return "Fall";
    case Op::Imply: return "imply";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Not: return "Not";
    case Op::Atom: return "Atom";
    case Op::True: return "true";
  }
  return "?";
}

std::optional<Op> op_from_name(std::string_view name) {
  static const std::pair<std::string_view, Op> kNames[] = {
      {"globally", Op::Globally},  {"always", Op::Globally},
      {"g", Op::Globally},         {"finally", Op::Finally},
      {"eventually", Op::Finally}, {"f", Op::Finally},
      {"until", Op::Until},        {"u", Op::Until},
      {"since", Op::Since},        {"s", Op::Since},
      {"historically", Op::Historically},
      {"h", Op::Historically},     {"once", Op::Once},
      {"o", Op::Once},             {"rise", Op::Rise},
      {"fall", Op::Fall},          {"imply", Op::Imply},
      {"implies", Op::Imply},      {"->", Op::Imply},
      {"and", Op::And},            {"&&", Op::And},
      {"&", Op::And},              {"or", Op::Or},
      {"||", Op::Or},              {"|", Op::Or},
      {"not", Op::Not},            {"!", Op::Not},
      {"~", Op::Not},              {"atom", Op::Atom},
      {"true", Op::True},
  };
  const std::string key = lower(trim(name));
  for (const auto& [spelling, op] : kNames) {
    if (spelling == key) return op;
  }
  return std::nullopt;
}

bool is_unary_temporal(Op op) noexcept {
  return op == Op::Globally || op == Op::Finally || op == Op::Historically ||
         op == Op::Once;
}
bool is_binary_temporal(Op op) noexcept {
  return op == Op::Until || op == Op::Since;
}
bool is_temporal(Op op) noexcept {
  return is_unary_temporal(op) || is_binary_temporal(op);
}
bool is_nary(Op op) noexcept { return op == Op::And || op == Op::Or; }

std::string_view comparator_symbol(Comparator c) noexcept {
  switch (c) {
    case Comparator::Gt: return ">";
    case Comparator::Ge: return ">=";
    case Comparator::Lt: return "<";
    case Comparator::Le: return "<=";
    case Comparator::Eq: return "==";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Predicates

Predicate parse_predicate(std::string_view text) {
  const std::string_view body = trim(text);
  const std::size_t offset = static_cast<std::size_t>(body.data() - text.data());
  const std::size_t cmp = body.find_first_of("<>=!");
  if (cmp == std::string_view::npos) bad_predicate(text, offset, "no comparator");

  const std::string_view signal = trim(body.substr(0, cmp));
  if (!is_identifier(signal)) {
    bad_predicate(text, offset, "signal is not an identifier");
  }

  Predicate p;
  p.signal = std::string(signal);
  std::size_t cmp_len = 1;
  const std::string_view two = body.substr(cmp, 2);
  if (two == ">=") {
    p.comparator = Comparator::Ge, cmp_len = 2;
  } else if (two == "<=") {
    p.comparator = Comparator::Le, cmp_len = 2;
  } else if (two == "==") {
    p.comparator = Comparator::Eq, cmp_len = 2;
  } else if (body[cmp] == '>') {
    p.comparator = Comparator::Gt;
  } else if (body[cmp] == '<') {
    p.comparator = Comparator::Lt;
  } else {
    bad_predicate(text, offset + cmp, "unknown comparator");
  }

  std::string_view number = trim(body.substr(cmp + cmp_len));
  const std::size_t num_pos =
      number.empty() ? text.size()
                     : static_cast<std::size_t>(number.data() - text.data());
  if (number.empty()) bad_predicate(text, num_pos, "missing threshold");
  // from_chars rejects a leading '+'.
  if (number.front() == '+') number.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(number.data(), number.data() + number.size(), value);
  if (ec != std::errc{} || end != number.data() + number.size()) {
    bad_predicate(text, num_pos, "threshold is not a decimal number");
  }
  if (!std::isfinite(value)) bad_predicate(text, num_pos, "threshold not finite");
  p.threshold = clean_zero(value);
  return p;
}

std::string format_decimal(double value) {
  value = clean_zero(value);
  char buf[512];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::fixed);
  if (ec != std::errc{}) {
    // Only reachable for magnitudes beyond 1e500, which doubles cannot hold.
    end = std::to_chars(buf, buf + sizeof buf, value).ptr;
  }
  std::string out(buf, end);
  if (out.find('.') == std::string::npos) out += ".0";
  return out;
}

std::string format_predicate(const Predicate& p) {
  std::string out = p.signal;
  out += comparator_symbol(p.comparator);
  out += format_decimal(p.threshold);
  return out;
}

// ---------------------------------------------------------------------------
// StlNode

StlNode StlNode::make(Parts parts) {
  const Op op = parts.op;
  const bool has_left = parts.left.has_value();
  const bool has_right = parts.right.has_value();
  const bool has_children = !parts.children.empty();
  const bool has_pred = parts.predicate.has_value();

  if (is_temporal(op) != parts.time.has_value()) {
    arity(std::string(op_name(op)) +
          (is_temporal(op) ? " requires a Time interval"
                           : " does not take a Time interval"));
  }
  if (parts.time) {
    const Interval& t = *parts.time;
    if (!std::isfinite(t.lo) || !std::isfinite(t.hi) || t.lo < 0.0 ||
        t.lo > t.hi) {
      std::ostringstream msg;
      msg << "invalid interval [" << t.lo << ", " << t.hi << "]";
      throw SchemaError(SchemaErrc::BadInterval, msg.str());
    }
  }

  bool ok = false;
  switch (op) {
    case Op::Globally:
    case Op::Finally:
    case Op::Historically:
    case Op::Once:
    case Op::Not:
      ok = !has_left && has_right && !has_children && !has_pred;
      break;
    case Op::Rise:
    case Op::Fall:
      ok = !has_left && has_right && !has_children && !has_pred &&
           parts.right->op() == Op::Atom;
      break;
    case Op::Until:
    case Op::Since:
    case Op::Imply:
      ok = has_left && has_right && !has_children && !has_pred;
      break;
    case Op::And:
    case Op::Or:
      ok = !has_left && !has_right && parts.children.size() >= 2 && !has_pred;
      break;
    case Op::Atom:
      ok = !has_left && !has_right && !has_children && has_pred;
      break;
    case Op::True:
      ok = !has_left && !has_right && !has_children && !has_pred;
      break;
  }
  if (!ok) arity(std::string("operands do not fit operator ") +
                 std::string(op_name(op)));
  if (has_pred && !std::isfinite(parts.predicate->threshold)) {
    throw SchemaError(SchemaErrc::BadPredicate, "threshold is not finite");
  }

  StlNode node;
  node.op_ = op;
  node.time_ = parts.time;
  if (has_left) node.left_ = std::make_shared<const StlNode>(std::move(*parts.left));
  if (has_right) node.right_ = std::make_shared<const StlNode>(std::move(*parts.right));
  node.children_ = std::move(parts.children);
  node.predicate_ = std::move(parts.predicate);
  return node;
}

StlNode StlNode::atom(Predicate p) {
  return make({.op = Op::Atom, .predicate = std::move(p)});
}
StlNode StlNode::atom(std::string_view predicate_text) {
  return atom(parse_predicate(predicate_text));
}
StlNode StlNode::truth() { return make({.op = Op::True}); }
StlNode StlNode::temporal(Op op, Interval time, StlNode child) {
  if (!is_unary_temporal(op)) arity("not a unary temporal operator");
  return make({.op = op, .time = time, .right = std::move(child)});
}
StlNode StlNode::until(Interval time, StlNode left, StlNode right) {
  return make({.op = Op::Until, .time = time, .left = std::move(left),
               .right = std::move(right)});
}
StlNode StlNode::since(Interval time, StlNode left, StlNode right) {
  return make({.op = Op::Since, .time = time, .left = std::move(left),
               .right = std::move(right)});
}
StlNode StlNode::imply(StlNode condition, StlNode consequent) {
  return make({.op = Op::Imply, .left = std::move(condition),
               .right = std::move(consequent)});
}
StlNode StlNode::negate(StlNode child) {
  return make({.op = Op::Not, .right = std::move(child)});
}
StlNode StlNode::rise(StlNode atom) {
  return make({.op = Op::Rise, .right = std::move(atom)});
}
StlNode StlNode::fall(StlNode atom) {
  return make({.op = Op::Fall, .right = std::move(atom)});
}
StlNode StlNode::conj(std::vector<StlNode> children) {
  return make({.op = Op::And, .children = std::move(children)});
}
StlNode StlNode::disj(std::vector<StlNode> children) {
  return make({.op = Op::Or, .children = std::move(children)});
}

std::vector<const StlNode*> StlNode::operands() const {
  std::vector<const StlNode*> out;
  if (left_) out.push_back(left_.get());
  if (right_) out.push_back(right_.get());
  for (const auto& c : children_) out.push_back(&c);
  return out;
}

bool operator==(const StlNode& a, const StlNode& b) {
  if (a.op_ != b.op_ || a.time_ != b.time_ || a.predicate_ != b.predicate_)
    return false;
  if (static_cast<bool>(a.left_) != static_cast<bool>(b.left_)) return false;
  if (static_cast<bool>(a.right_) != static_cast<bool>(b.right_)) return false;
  if (a.left_ && !(*a.left_ == *b.left_)) return false;
  if (a.right_ && !(*a.right_ == *b.right_)) return false;
  return a.children_ == b.children_;
}

std::size_t StlNode::depth() const {
  std::size_t d = 0;
  for (const StlNode* c : operands()) d = std::max(d, c->depth());
  return d + 1;
}

std::size_t StlNode::operator_count() const {
  if (op_ == Op::Atom || op_ == Op::True) return 0;
  std::size_t n = 1;
  for (const StlNode* c : operands()) n += c->operator_count();
  return n;
}

std::size_t StlNode::predicate_count() const {
  if (op_ == Op::Atom) return 1;
  std::size_t n = 0;
  for (const StlNode* c : operands()) n += c->predicate_count();
  return n;
}

// ---------------------------------------------------------------------------
// JSON wire form

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

bool present(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it != obj.end() && !it->is_null();
}

Interval interval_from_json(const json& t) {
  if (!t.is_array() || t.size() != 2 || !t[0].is_number() ||
      !t[1].is_number()) {
    throw SchemaError(SchemaErrc::BadInterval,
                      "Time must be a list of two numbers, got " + t.dump());
  }
  return Interval{t[0].get<double>(), t[1].get<double>()};
}

StlNode raw_node(const json& j);

std::optional<StlNode> raw_child(const json& obj, const char* key) {
  if (!present(obj, key)) return std::nullopt;
  return raw_node(obj.at(key));
}

StlNode raw_leaf(const std::string& text) {
  if (lower(trim(text)) == "true") return StlNode::truth();
  return StlNode::atom(parse_predicate(text));
}

StlNode raw_node(const json& j) {
  if (j.is_string()) return raw_leaf(j.get<std::string>());
  if (!j.is_object()) {
    throw SchemaError(SchemaErrc::Json,
                      "expected an STL node object or predicate string, got " +
                          std::string(j.type_name()));
  }
  if (!present(j, "Operation")) {
    throw SchemaError(SchemaErrc::MissingField, "node lacks 'Operation'");
  }
  const json& op_field = j.at("Operation");
  if (!op_field.is_string()) {
    throw SchemaError(SchemaErrc::Json, "'Operation' must be a string");
  }
  const auto op = op_from_name(op_field.get<std::string>());
  if (!op) arity("unknown operator '" + op_field.get<std::string>() + "'");

  if (*op == Op::Atom) {
    if (!present(j, "Predicate") || !j.at("Predicate").is_string()) {
      throw SchemaError(SchemaErrc::MissingField, "Atom lacks 'Predicate'");
    }
    return StlNode::atom(parse_predicate(j.at("Predicate").get<std::string>()));
  }
  if (*op == Op::True) return StlNode::truth();

  StlNode::Parts parts;
  parts.op = *op;
  if (present(j, "Time")) {
    if (!is_temporal(*op)) {
      arity(std::string(op_name(*op)) + " does not take a Time interval");
    }
    parts.time = interval_from_json(j.at("Time"));
  } else if (is_temporal(*op)) {
    throw SchemaError(SchemaErrc::MissingField,
                      std::string(op_name(*op)) + " lacks 'Time'");
  }

  // Required operand fields are reported as missing; surplus ones fall
  // through to the arity check in StlNode::make.
  const bool wants_right = !is_nary(*op);
  const bool wants_left = is_binary_temporal(*op) || *op == Op::Imply;
  if (wants_right && !present(j, "Rightaction")) {
    throw SchemaError(SchemaErrc::MissingField,
                      std::string(op_name(*op)) + " lacks 'Rightaction'");
  }
  if (wants_left && !present(j, "Leftaction")) {
    throw SchemaError(SchemaErrc::MissingField,
                      std::string(op_name(*op)) + " lacks 'Leftaction'");
  }
  if (is_nary(*op) && !present(j, "SubQueries")) {
    throw SchemaError(SchemaErrc::MissingField,
                      std::string(op_name(*op)) + " lacks 'SubQueries'");
  }

  parts.left = raw_child(j, "Leftaction");
  parts.right = raw_child(j, "Rightaction");
  if (present(j, "SubQueries")) {
    const json& subs = j.at("SubQueries");
    if (!subs.is_array()) arity("'SubQueries' must be a list");
    for (const json& s : subs) parts.children.push_back(raw_node(s));
  }
  return StlNode::make(std::move(parts));
}

json time_bound(double v) {
  v = clean_zero(v);
  if (v == std::floor(v) && std::fabs(v) < 9007199254740992.0) {
    return json(static_cast<std::int64_t>(v));
  }
  return json(v);
}

ordered_json node_to_json(const StlNode& n) {
  switch (n.op()) {
    case Op::Atom: return format_predicate(*n.predicate());
    case Op::True: return "true";
    default: break;
  }
  ordered_json out;
  out["Operation"] = op_name(n.op());
  if (n.time()) {
    out["Time"] = ordered_json::array(
        {time_bound(n.time()->lo), time_bound(n.time()->hi)});
  }
  if (is_nary(n.op())) {
    ordered_json subs = ordered_json::array();
    for (const StlNode& c : n.children()) subs.push_back(node_to_json(c));
    out["SubQueries"] = std::move(subs);
  } else {
    out["Leftaction"] = n.left() ? node_to_json(*n.left()) : ordered_json();
    out["Rightaction"] = node_to_json(*n.right());
  }
  return out;
}

}  // namespace

StlNode node_from_json(const nlohmann::json& node) {
  return canonicalize(raw_node(node));
}

StlNode stl_from_json(const nlohmann::json& document) {
  if (!document.is_object()) {
    throw SchemaError(SchemaErrc::Json, "STL document must be a JSON object");
  }
  if (!present(document, "STL")) {
    throw SchemaError(SchemaErrc::MissingField, "document lacks 'STL'");
  }
  return node_from_json(document.at("STL"));
}

StlNode parse_stl_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError(SchemaErrc::Json, e.what());
  }
  return stl_from_json(doc);
}

nlohmann::ordered_json stl_to_json(const StlNode& node) {
  ordered_json doc;
  doc["STL"] = node_to_json(node);
  return doc;
}

std::string serialize_stl_json(const StlNode& node) {
  return stl_to_json(node).dump();
}

// ---------------------------------------------------------------------------
// Canonicalization and inspection

StlNode canonicalize(const StlNode& node) {
  StlNode::Parts parts;
  parts.op = node.op();
  if (node.time()) {
    parts.time = Interval{clean_zero(node.time()->lo), clean_zero(node.time()->hi)};
  }
  if (node.predicate()) {
    Predicate p = *node.predicate();
    p.signal = SignalVocabulary::standard().normalize(p.signal);
    p.threshold = clean_zero(p.threshold);
    if (!is_identifier(p.signal)) {
      throw SchemaError(SchemaErrc::BadPredicate,
                        "signal '" + p.signal + "' is not an identifier");
    }
    parts.predicate = std::move(p);
  }
  if (node.left()) parts.left = canonicalize(*node.left());
  if (node.right()) parts.right = canonicalize(*node.right());
  for (const StlNode& c : node.children()) {
    parts.children.push_back(canonicalize(c));
  }
  return StlNode::make(std::move(parts));
}

namespace {

std::string bound_text(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void render(const StlNode& n, std::string& out) {
  auto window = [&] {
    out += '[' + bound_text(n.time()->lo) + ',' + bound_text(n.time()->hi) + ']';
  };
  switch (n.op()) {
    case Op::Atom: out += format_predicate(*n.predicate()); return;
    case Op::True: out += "true"; return;
    case Op::Globally:
    case Op::Finally:
    case Op::Historically:
    case Op::Once:
      out += op_name(n.op()).front();
      window();
      out += '(';
      render(*n.right(), out);
      out += ')';
      return;
    case Op::Until:
    case Op::Since:
      out += '(';
      render(*n.left(), out);
      out += n.op() == Op::Until ? " U" : " S";
      window();
      out += ' ';
      render(*n.right(), out);
      out += ')';
      return;
    case Op::Imply:
      out += '(';
      render(*n.left(), out);
      out += " -> ";
      render(*n.right(), out);
      out += ')';
      return;
    case Op::Not:
    case Op::Rise:
    case Op::Fall:
      out += n.op() == Op::Not ? "!" : lower(op_name(n.op()));
      out += '(';
      render(*n.right(), out);
      out += ')';
      return;
    case Op::And:
    case Op::Or: {
      out += op_name(n.op());
      out += '(';
      bool first = true;
      for (const StlNode& c : n.children()) {
        if (!first) out += ", ";
        first = false;
        render(c, out);
      }
      out += ')';
      return;
    }
  }
}

void collect(const StlNode& n, NumericFields& fields) {
  if (n.time()) {
    fields.time_bounds.push_back(n.time()->lo);
    fields.time_bounds.push_back(n.time()->hi);
  }
  if (n.predicate()) fields.thresholds.push_back(n.predicate()->threshold);
  for (const StlNode* c : n.operands()) collect(*c, fields);
}

void collect(const StlNode& n, std::vector<Predicate>& preds) {
  if (n.predicate()) preds.push_back(*n.predicate());
  for (const StlNode* c : n.operands()) collect(*c, preds);
}

}  // namespace

std::string to_string(const StlNode& node) {
  std::string out;
  render(node, out);
  return out;
}

NumericFields collect_numeric_fields(const StlNode& node) {
  NumericFields fields;
  collect(node, fields);
  return fields;
}

std::vector<Predicate> collect_predicates(const StlNode& node) {
  std::vector<Predicate> preds;
  collect(node, preds);
  return preds;
}

}  // namespace stlforge

#ifndef RMM_INSTANCE_HPP
#define RMM_INSTANCE_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace rmm {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class InvalidMatching : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One tie group in a preference list: all posts share the same rank.
struct RankGroup {
  int rank = 0;
  std::vector<int> posts;  // post indices, sorted ascending

  friend bool operator==(const RankGroup&, const RankGroup&) = default;
};

/// A one-sided preference instance: applicants with ranked (possibly tied)
/// lists over posts. Immutable after construction.
class PreferenceInstance {
 public:
  PreferenceInstance() = default;

  int num_applicants() const { return static_cast<int>(applicant_ids_.size()); }
  int num_posts() const { return static_cast<int>(post_ids_.size()); }
  int max_rank() const { return max_rank_; }
  bool has_last_resorts() const { return has_last_resorts_; }

  const std::string& applicant_id(int a) const { return applicant_ids_[a]; }
  const std::string& post_id(int p) const { return post_ids_[p]; }
  const std::vector<RankGroup>& prefs(int a) const { return prefs_[a]; }

  std::optional<int> applicant_index(const std::string& id) const {
    auto it = applicant_index_.find(id);
    if (it == applicant_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> post_index(const std::string& id) const {
    auto it = post_index_.find(id);
    if (it == post_index_.end()) return std::nullopt;
    return it->second;
  }

  /// True when post p is a dummy last-resort post.
  bool is_last_resort(int p) const {
    return has_last_resorts_ && p >= first_last_resort_;
  }

  /// Rank of post p in applicant a's list, or nullopt if (a,p) is not an edge.
  std::optional<int> rank_of(int a, int p) const {
    auto it = rank_.find(edge_key(a, p));
    if (it == rank_.end()) return std::nullopt;
    return it->second;
  }

  bool has_edge(int a, int p) const { return rank_.contains(edge_key(a, p)); }

  /// All edges as (applicant, post, rank), grouped by applicant.
  std::vector<std::tuple<int, int, int>> edges() const {
    std::vector<std::tuple<int, int, int>> out;
    for (int a = 0; a < num_applicants(); ++a)
      for (const auto& g : prefs_[a])
        for (int p : g.posts) out.emplace_back(a, p, g.rank);
    return out;
  }

  /// True when every list uses dense ranks 1..len with no gaps.
  bool dense_ranks() const {
    for (const auto& groups : prefs_) {
      int expect = 1;
      for (const auto& g : groups)
        if (g.rank != expect++) return false;
    }
    return true;
  }

  class Builder;

 private:
  static std::uint64_t edge_key(int a, int p) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(p);
  }

  std::vector<std::string> applicant_ids_;
  std::vector<std::string> post_ids_;
  std::unordered_map<std::string, int> applicant_index_;
  std::unordered_map<std::string, int> post_index_;
  std::vector<std::vector<RankGroup>> prefs_;
  std::unordered_map<std::uint64_t, int> rank_;
  int max_rank_ = 0;
  bool has_last_resorts_ = false;
  int first_last_resort_ = 0;
};

class PreferenceInstance::Builder {
 public:
  /// Declares a post if not yet known; returns its index.
  int add_post(const std::string& id) {
    auto it = inst_.post_index_.find(id);
    if (it != inst_.post_index_.end()) return it->second;
    int p = static_cast<int>(inst_.post_ids_.size());
    inst_.post_ids_.push_back(id);
    inst_.post_index_.emplace(id, p);
    return p;
  }

  int add_applicant(const std::string& id) {
    if (inst_.applicant_index_.contains(id))
      throw std::invalid_argument("duplicate applicant id: " + id);
    int a = static_cast<int>(inst_.applicant_ids_.size());
    inst_.applicant_ids_.push_back(id);
    inst_.applicant_index_.emplace(id, a);
    inst_.prefs_.emplace_back();
    return a;
  }

  /// Appends a tie group at the given rank (must exceed a's previous rank).
  void add_group(int a, int rank, std::vector<int> posts) {
    auto& groups = inst_.prefs_.at(a);
    if (rank < 1 || (!groups.empty() && rank <= groups.back().rank))
      throw std::invalid_argument("ranks must be strictly increasing");
    std::sort(posts.begin(), posts.end());
    for (std::size_t i = 0; i + 1 < posts.size(); ++i)
      if (posts[i] == posts[i + 1])
        throw std::invalid_argument("duplicate post in tie group");
    for (int p : posts) {
      auto [it, fresh] = inst_.rank_.emplace(edge_key(a, p), rank);
      if (!fresh)
        throw std::invalid_argument("post " + inst_.post_ids_[p] +
                                    " appears twice in one list");
    }
    inst_.max_rank_ = std::max(inst_.max_rank_, rank);
    groups.push_back(RankGroup{rank, std::move(posts)});
  }

  void mark_last_resorts_from(int first_post) {
    inst_.has_last_resorts_ = true;
    inst_.first_last_resort_ = first_post;
  }

  PreferenceInstance build() { return std::move(inst_); }

 private:
  PreferenceInstance inst_;
};

/// Applicant-post assignment, partial on both sides.
class Matching {
 public:
  Matching() = default;
  Matching(int num_applicants, int num_posts)
      : post_of_(num_applicants, -1), applicant_of_(num_posts, -1) {}

  int post_of(int a) const { return post_of_[a]; }
  int applicant_of(int p) const { return applicant_of_[p]; }
  bool applicant_matched(int a) const { return post_of_[a] >= 0; }
  bool post_matched(int p) const { return applicant_of_[p] >= 0; }
  int num_applicant_slots() const { return static_cast<int>(post_of_.size()); }
  int num_post_slots() const { return static_cast<int>(applicant_of_.size()); }

  int size() const {
    int n = 0;
    for (int p : post_of_) n += (p >= 0);
    return n;
  }

  void match(int a, int p) {
    if (post_of_[a] >= 0 || applicant_of_[p] >= 0)
      throw InvalidMatching("endpoint already matched");
    post_of_[a] = p;
    applicant_of_[p] = a;
  }

  void unmatch(int a) {
    int p = post_of_[a];
    if (p >= 0) {
      post_of_[a] = -1;
      applicant_of_[p] = -1;
    }
  }

  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < num_applicant_slots(); ++a)
      if (post_of_[a] >= 0) out.emplace_back(a, post_of_[a]);
    return out;
  }

  friend bool operator==(const Matching&, const Matching&) = default;

  /// Validates that every pair is an instance edge.
  void validate(const PreferenceInstance& inst) const {
    for (auto [a, p] : pairs())
      if (!inst.has_edge(a, p))
        throw InvalidMatching("pair (" + inst.applicant_id(a) + "," +
                              inst.post_id(p) + ") is not an instance edge");
  }

 private:
  std::vector<int> post_of_;
  std::vector<int> applicant_of_;
};

/// Rank histogram of a matching: counts[i-1] applicants matched at rank i.
struct Signature {
  std::vector<int> counts;

  int at(int rank) const {  // 1-based; 0 beyond the stored length
    return rank <= static_cast<int>(counts.size()) ? counts[rank - 1] : 0;
  }
  int total() const {
    int t = 0;
    for (int c : counts) t += c;
    return t;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(counts[i]);
    }
    return s + ")";
  }
};

/// Lexicographic order with implicit zero padding on the right.
inline std::strong_ordering compare_signatures(const Signature& s1,
                                               const Signature& s2) {
  std::size_t n = std::max(s1.counts.size(), s2.counts.size());
  for (std::size_t i = 1; i <= n; ++i) {
    int a = s1.at(static_cast<int>(i));
    int b = s2.at(static_cast<int>(i));
    if (a != b) return a <=> b;
  }
  return std::strong_ordering::equal;
}

inline bool operator==(const Signature& a, const Signature& b) {
  return compare_signatures(a, b) == std::strong_ordering::equal;
}

inline Signature signature_of(const PreferenceInstance& inst,
                              const Matching& m) {
  Signature sig;
  sig.counts.assign(inst.max_rank(), 0);
  for (auto [a, p] : m.pairs()) {
    auto rank = inst.rank_of(a, p);
    if (!rank)
      throw InvalidMatching("pair (" + inst.applicant_id(a) + "," +
                            inst.post_id(p) + ") is not an instance edge");
    ++sig.counts[*rank - 1];
  }
  return sig;
}

/// Id of the dummy last-resort post for an applicant.
inline std::string last_resort_id(const std::string& applicant_id) {
  return "~" + applicant_id;
}

/// Returns a copy of inst with one dummy last-resort post per applicant,
/// appended as a singleton group at rank max_rank+1.
inline PreferenceInstance add_last_resorts(const PreferenceInstance& inst) {
  if (inst.has_last_resorts())
    throw std::invalid_argument("last resorts already present");
  PreferenceInstance::Builder b;
  for (int p = 0; p < inst.num_posts(); ++p) b.add_post(inst.post_id(p));
  int bottom = inst.max_rank() + 1;
  int first_lr = inst.num_posts();
  for (int a = 0; a < inst.num_applicants(); ++a) {
    int idx = b.add_applicant(inst.applicant_id(a));
    for (const auto& g : inst.prefs(a)) b.add_group(idx, g.rank, g.posts);
    b.add_group(idx, bottom, {b.add_post(last_resort_id(inst.applicant_id(a)))});
  }
  b.mark_last_resorts_from(first_lr);
  return b.build();
}

/// Drops last-resort pairs, mapping the matching back to the real posts of
/// `original` (which must be the instance last resorts were added to).
inline Matching strip_last_resorts(const PreferenceInstance& augmented,
                                   const PreferenceInstance& original,
                                   const Matching& m) {
  Matching out(original.num_applicants(), original.num_posts());
  for (auto [a, p] : m.pairs()) {
    if (augmented.is_last_resort(p)) continue;
    auto oa = original.applicant_index(augmented.applicant_id(a));
    auto op = original.post_index(augmented.post_id(p));
    if (!oa || !op) throw InvalidMatching("matching does not fit instance");
    out.match(*oa, *op);
  }
  return out;
}

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

struct Tokenizer {
  std::string_view s;
  std::size_t i = 0;
  void skip_ws() {
    while (i < s.size() && is_space(s[i])) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  // A token is a run of non-space characters, with '(' and ')' standing alone.
  std::string next() {
    skip_ws();
    if (i >= s.size()) return {};
    if (s[i] == '(' || s[i] == ')') return std::string(1, s[i++]);
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i]) && s[i] != '(' && s[i] != ')') ++i;
    return std::string(s.substr(start, i - start));
  }
};

// Splits "pid@k" into the id and optional explicit rank.
inline std::pair<std::string, std::optional<int>> split_rank(
    const std::string& tok, int line) {
  auto at = tok.rfind('@');
  if (at == std::string::npos) return {tok, std::nullopt};
  std::string id = tok.substr(0, at);
  std::string num = tok.substr(at + 1);
  if (id.empty() || num.empty() ||
      num.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(line, "malformed rank annotation '" + tok + "'");
  int rank = std::stoi(num);
  if (rank < 1) throw ParseError(line, "rank must be positive in '" + tok + "'");
  return {id, rank};
}

}  // namespace detail

/// Parses the line-oriented instance format. See the repository README for
/// the grammar; errors carry 1-based line numbers.
inline PreferenceInstance parse_instance(std::istream& in) {
  PreferenceInstance::Builder b;
  std::unordered_map<std::string, int> applicants_seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    detail::Tokenizer tz{line};
    if (tz.done()) continue;

    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError(lineno, "expected '<id>:' at start of line");
    std::string head = line.substr(0, colon);
    while (!head.empty() && detail::is_space(head.back())) head.pop_back();
    std::size_t hs = 0;
    while (hs < head.size() && detail::is_space(head[hs])) ++hs;
    head = head.substr(hs);
    if (head.empty()) throw ParseError(lineno, "missing id before ':'");
    if (head.find_first_of(" \t()@") != std::string::npos)
      throw ParseError(lineno, "malformed id '" + head + "'");

    detail::Tokenizer body{line};
    body.i = colon + 1;

    if (head == "posts") {
      while (!body.done()) {
        std::string tok = body.next();
        if (tok == "(" || tok == ")")
          throw ParseError(lineno, "unexpected '" + tok + "' in posts header");
        b.add_post(tok);
      }
      continue;
    }

    if (applicants_seen.contains(head))
      throw ParseError(lineno, "applicant '" + head + "' declared twice");
    applicants_seen.emplace(head, lineno);
    int a = b.add_applicant(head);

    int prev_rank = 0;
    bool any_group = false;
    while (!body.done()) {
      std::string tok = body.next();
      std::vector<std::string> ids;
      std::optional<int> explicit_rank;
      if (tok == ")") throw ParseError(lineno, "unmatched ')'");
      if (tok == "(") {
        for (;;) {
          if (body.done()) throw ParseError(lineno, "unterminated tie group");
          std::string t = body.next();
          if (t == "(") throw ParseError(lineno, "nested tie group");
          if (t == ")") break;
          ids.push_back(t);
        }
        if (ids.empty()) throw ParseError(lineno, "empty tie group");
        // Optional "@k" directly after the closing paren.
        body.skip_ws();
        if (body.i < body.s.size() && body.s[body.i] == '@') {
          std::string suffix = body.next();  // "@k"
          std::string num = suffix.substr(1);
          if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError(lineno, "malformed group rank '" + suffix + "'");
          explicit_rank = std::stoi(num);
          if (*explicit_rank < 1)
            throw ParseError(lineno, "rank must be positive in '" + suffix + "'");
        }
      } else {
        auto [id, rank] = detail::split_rank(tok, lineno);
        ids.push_back(id);
        explicit_rank = rank;
      }
      int rank = explicit_rank ? *explicit_rank : prev_rank + 1;
      if (rank <= prev_rank)
        throw ParseError(lineno, "rank " + std::to_string(rank) +
                                     " does not increase (previous rank " +
                                     std::to_string(prev_rank) + ")");
      std::vector<int> posts;
      posts.reserve(ids.size());
      for (const auto& id : ids) posts.push_back(b.add_post(id));
      try {
        b.add_group(a, rank, std::move(posts));
      } catch (const std::invalid_argument& e) {
        throw ParseError(lineno, e.what());
      }
      prev_rank = rank;
      any_group = true;
    }
    if (!any_group)
      throw ParseError(lineno, "empty preference list for '" + head + "'");
  }
  return b.build();
}

inline PreferenceInstance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline void serialize_instance(const PreferenceInstance& inst,
                               std::ostream& out) {
  // Posts that appear in no list must be declared up front to survive a
  // round trip.
  std::vector<bool> referenced(inst.num_posts(), false);
  for (auto [a, p, r] : inst.edges()) referenced[p] = true;
  std::string isolated;
  for (int p = 0; p < inst.num_posts(); ++p)
    if (!referenced[p]) isolated += " " + inst.post_id(p);
  if (!isolated.empty()) out << "posts:" << isolated << "\n";

  for (int a = 0; a < inst.num_applicants(); ++a) {
    out << inst.applicant_id(a) << ":";
    int prev_rank = 0;
    for (const auto& g : inst.prefs(a)) {
      bool implicit = g.rank == prev_rank + 1;
      out << " ";
      if (g.posts.size() == 1) {
        out << inst.post_id(g.posts[0]);
        if (!implicit) out << "@" << g.rank;
      } else {
        out << "(";
        for (std::size_t i = 0; i < g.posts.size(); ++i)
          out << (i ? " " : " ") << inst.post_id(g.posts[i]);
        out << " )";
        if (!implicit) out << "@" << g.rank;
      }
      prev_rank = g.rank;
    }
    out << "\n";
  }
}

inline std::string serialize_instance(const PreferenceInstance& inst) {
  std::ostringstream out;
  serialize_instance(inst, out);
  return out.str();
}

/// Matching file format: one "<aid> <pid>" pair per line.
inline Matching parse_matching(const PreferenceInstance& inst,
                               std::istream& in) {
  Matching m(inst.num_applicants(), inst.num_posts());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string aid, pid, extra;
    if (!(ls >> aid)) continue;
    if (!(ls >> pid) || (ls >> extra))
      throw ParseError(lineno, "expected '<aid> <pid>'");
    auto a = inst.applicant_index(aid);
    if (!a) throw ParseError(lineno, "unknown applicant '" + aid + "'");
    auto p = inst.post_index(pid);
    if (!p) throw ParseError(lineno, "unknown post '" + pid + "'");
    if (!inst.has_edge(*a, *p))
      throw ParseError(lineno, "(" + aid + "," + pid + ") is not an edge");
    try {
      m.match(*a, *p);
    } catch (const InvalidMatching& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return m;
}

inline Matching parse_matching(const PreferenceInstance& inst,
                               const std::string& text) {
  std::istringstream in(text);
  return parse_matching(inst, in);
}

}  // namespace rmm

#endif  // RMM_INSTANCE_HPP

#include "hyp/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace hyp {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax: return "syntax-error";
    case ErrorKind::Input: return "input-error";
    case ErrorKind::Domain: return "parameter-domain-violation";
    case ErrorKind::StrategyNotVerified: return "strategy-not-verified";
    case ErrorKind::BudgetExhausted: return "budget-exhausted";
    case ErrorKind::InsufficientRadius: return "insufficient-radius";
    case ErrorKind::CombinatorialBlowup: return "combinatorial-blowup";
    case ErrorKind::Precondition: return "precondition-violated";
  }
  return "error";
}

Word inverse(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (auto& x : r) x = inv(x);
  return r;
}

Word concat(const Word& u, const Word& v) {
  Word r;
  r.reserve(u.size() + v.size());
  r.insert(r.end(), u.begin(), u.end());
  r.insert(r.end(), v.begin(), v.end());
  return r;
}

Word free_reduce(const Word& w) {
  Word s;
  s.reserve(w.size());
  for (Letter x : w) {
    if (!s.empty() && s.back() == inv(x))
      s.pop_back();
    else
      s.push_back(x);
  }
  return s;
}

Word cyclic_reduce(const Word& w) {
  Word s = free_reduce(w);
  std::size_t i = 0, j = s.size();
  while (j - i >= 2 && s[i] == inv(s[j - 1])) {
    ++i;
    --j;
  }
  return Word(s.begin() + static_cast<long>(i), s.begin() + static_cast<long>(j));
}

bool is_freely_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == inv(w[i - 1])) return false;
  return true;
}

bool shortlex_less(const Word& u, const Word& v) {
  if (u.size() != v.size()) return u.size() < v.size();
  return u < v;
}

Alphabet::Alphabet(std::vector<char> gens) : gens_(std::move(gens)) {
  std::set<char> seen;
  for (char c : gens_) {
    if (!std::islower(static_cast<unsigned char>(c)))
      fail(ErrorKind::Syntax, std::string("generator '") + c + "' must be a lowercase letter");
    if (!seen.insert(c).second)
      fail(ErrorKind::Syntax, std::string("duplicate generator '") + c + "'");
  }
}

char Alphabet::symbol(Letter x) const {
  char c = gens_.at(x >> 1);
  return (x & 1u) ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
}

Word Alphabet::parse(const std::string& text) const {
  Word w;
  if (text.find_first_not_of(" \t") != std::string::npos &&
      text.substr(text.find_first_not_of(" \t"), 1) == "1" &&
      text.find_first_not_of(" \t1") == std::string::npos)
    return w;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto it = std::find(gens_.begin(), gens_.end(), lower);
    if (it == gens_.end())
      fail(ErrorKind::Syntax, std::string("letter '") + c +
                                  "' has no generator/inverse pairing in this alphabet");
    int g = static_cast<int>(it - gens_.begin());
    bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
    w.push_back(static_cast<Letter>(2 * g + (upper ? 1 : 0)));
  }
  return w;
}

std::string Alphabet::format(const Word& w) const {
  std::string s;
  for (Letter x : w) s.push_back(symbol(x));
  return s;
}

// ---------------------------------------------------------------------------
// Symmetrized relators and the small-cancellation certificate

std::vector<Word> symmetrize(const std::vector<Word>& relators) {
  std::set<Word> out;
  for (const auto& r : relators) {
    for (const Word& base : {r, inverse(r)}) {
      for (std::size_t k = 0; k < base.size(); ++k) {
        Word c(base.begin() + static_cast<long>(k), base.end());
        c.insert(c.end(), base.begin(), base.begin() + static_cast<long>(k));
        out.insert(c);
      }
    }
  }
  std::vector<Word> v(out.begin(), out.end());
  std::sort(v.begin(), v.end(), shortlex_less);
  return v;
}

namespace {

int minimal_period(const Word& r) {
  int n = static_cast<int>(r.size());
  for (int p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (int i = p; i < n && ok; ++i) ok = r[i] == r[i - p];
    if (ok) return p;
  }
  return n;
}

}  // namespace

SmallCancellationCertificate certify_small_cancellation(const std::vector<Word>& relators) {
  SmallCancellationCertificate c;
  if (relators.empty()) return c;
  c.min_relator_length = static_cast<int>(relators.front().size());
  for (const auto& r : relators) {
    c.min_relator_length = std::min<int>(c.min_relator_length, static_cast<int>(r.size()));
    // a proper power overlaps itself in all but one period
    int p = minimal_period(r);
    if (p < static_cast<int>(r.size()))
      c.max_piece_length = std::max<int>(c.max_piece_length, static_cast<int>(r.size()) - p);
  }
  auto sym = symmetrize(relators);
  for (std::size_t i = 0; i < sym.size(); ++i) {
    for (std::size_t j = i + 1; j < sym.size(); ++j) {
      const Word& u = sym[i];
      const Word& v = sym[j];
      std::size_t m = std::min(u.size(), v.size());
      std::size_t k = 0;
      while (k < m && u[k] == v[k]) ++k;
      c.max_piece_length = std::max<int>(c.max_piece_length, static_cast<int>(k));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Dehn reduction.  The trie holds every relator subword longer than half its
// relator, reversed, so that matches are found by walking down from the top of
// the output stack.

class DehnTrie {
 public:
  DehnTrie(int alphabet_size, const std::vector<Word>& sym) : width_(alphabet_size) {
    nodes_.emplace_back(width_);
    for (const auto& r : sym) {
      const std::size_t L = r.size();
      for (std::size_t k = L / 2 + 1; k <= L; ++k) {
        int node = 0;
        for (std::size_t i = k; i-- > 0;) {
          Letter x = r[i];
          if (nodes_[node].child[x] < 0) {
            nodes_[node].child[x] = static_cast<int>(nodes_.size());
            nodes_.emplace_back(width_);
          }
          node = nodes_[node].child[x];
        }
        if (nodes_[node].replacement < 0) {
          Word rest(r.begin() + static_cast<long>(k), r.end());
          nodes_[node].replacement = static_cast<int>(replacements_.size());
          nodes_[node].length = static_cast<int>(k);
          replacements_.push_back(inverse(rest));
        }
      }
    }
  }

  Word reduce(const Word& w) const {
    Word out;
    out.reserve(w.size());
    Word pending(w.rbegin(), w.rend());
    while (!pending.empty()) {
      Letter x = pending.back();
      pending.pop_back();
      if (!out.empty() && out.back() == inv(x)) {
        out.pop_back();
        continue;
      }
      out.push_back(x);
      int node = 0;
      for (std::size_t i = out.size(); i-- > 0;) {
        node = nodes_[node].child[out[i]];
        if (node < 0) break;
        if (nodes_[node].replacement >= 0) {
          out.resize(out.size() - static_cast<std::size_t>(nodes_[node].length));
          const Word& rep = replacements_[static_cast<std::size_t>(nodes_[node].replacement)];
          for (std::size_t j = rep.size(); j-- > 0;) pending.push_back(rep[j]);
          break;
        }
      }
    }
    return out;
  }

 private:
  struct Node {
    explicit Node(int width) : child(static_cast<std::size_t>(width), -1) {}
    std::vector<int> child;
    int replacement = -1;
    int length = 0;
  };
  int width_;
  std::vector<Node> nodes_;
  std::vector<Word> replacements_;
};

GroupPresentation::GroupPresentation(std::string name, Alphabet alphabet,
                                     std::vector<Word> relators)
    : name_(std::move(name)), alphabet_(std::move(alphabet)) {
  for (const auto& r : relators) {
    Word c = cyclic_reduce(r);
    if (c.empty())
      fail(ErrorKind::Input, "relator \"" + alphabet_.format(r) + "\" freely reduces to empty");
    for (Letter x : c)
      if ((x >> 1) >= alphabet_.rank())
        fail(ErrorKind::Input, "relator uses a letter outside the alphabet");
    relators_.push_back(std::move(c));
  }
  if (relators_.empty()) {
    strategy_ = WpStrategy::FreeGroup;
    verified_ = true;
  } else {
    strategy_ = WpStrategy::DehnSmallCancellation;
    cert_ = certify_small_cancellation(relators_);
    verified_ = cert_.accepted();
    sym_ = symmetrize(relators_);
  }
  trie_ = std::make_shared<DehnTrie>(alphabet_.size(), sym_);
}

Word GroupPresentation::dehn_reduce(const Word& w) const {
  if (!verified_)
    fail(ErrorKind::StrategyNotVerified,
         "presentation '" + name_ + "' failed the C'(1/6) certificate (max piece " +
             std::to_string(cert_.max_piece_length) + ", min relator " +
             std::to_string(cert_.min_relator_length) + ")");
  if (strategy_ == WpStrategy::FreeGroup) return free_reduce(w);
  return trie_->reduce(w);
}

bool GroupPresentation::is_identity(const Word& w) const { return dehn_reduce(w).empty(); }

bool GroupPresentation::equal(const Word& u, const Word& v) const {
  return is_identity(concat(u, inverse(v)));
}

std::string GroupPresentation::digest() const {
  std::string canon = name_ + "|";
  for (char c : alphabet_.generators()) canon.push_back(c);
  for (const auto& r : relators_) canon += "|" + alphabet_.format(r);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

Word dehn_reduce(const Word& w, const GroupPresentation& p) { return p.dehn_reduce(w); }
bool is_identity(const Word& w, const GroupPresentation& p) { return p.is_identity(w); }

// ---------------------------------------------------------------------------
// Input files

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

[[noreturn]] void syntax(int line, const std::string& msg) {
  fail(ErrorKind::Syntax, "line " + std::to_string(line) + ": " + msg);
}

struct RawEntry {
  std::string section;
  std::string key;
  std::string value;
  int line;
};

std::vector<RawEntry> tokenize(const std::string& text) {
  std::vector<RawEntry> out;
  std::istringstream in(text);
  std::string raw;
  std::string section = "group";
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') syntax(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "group" && section != "subgroup" && section != "constants" &&
          section != "candidate")
        syntax(line, "unknown section [" + section + "]");
      out.push_back({section, "", "", line});
      continue;
    }
    std::string key, value;
    auto eq = s.find('=');
    if (eq != std::string::npos) {
      key = trim(s.substr(0, eq));
      value = trim(s.substr(eq + 1));
    } else {
      auto sp = s.find_first_of(" \t");
      key = trim(s.substr(0, sp));
      value = sp == std::string::npos ? "" : trim(s.substr(sp));
    }
    if (key.empty()) syntax(line, "missing key");
    out.push_back({section, key, value, line});
  }
  return out;
}

std::vector<Word> parse_word_list(const Alphabet& a, const std::string& value, int line,
                                  bool allow_empty_words) {
  std::vector<Word> out;
  std::string v = trim(value);
  if (v.empty() || v == "(none)") return out;
  for (const auto& part : split(v, ',')) {
    if (part.empty()) syntax(line, "empty word in list");
    try {
      Word w = a.parse(part);
      if (w.empty() && !allow_empty_words) syntax(line, "empty relator \"" + part + "\"");
      out.push_back(std::move(w));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Syntax && std::string(e.what()).rfind("line ", 0) != 0)
        syntax(line, e.what());
      throw;
    }
  }
  return out;
}

}  // namespace

GroupPresentation parse_presentation(const std::string& text) {
  auto spec = parse_input(text);
  return *spec.presentation;
}

InputSpec parse_input(const std::string& text) {
  auto entries = tokenize(text);
  std::string name = "G";
  std::optional<std::vector<char>> gens;
  std::optional<std::pair<std::string, int>> relators;
  std::vector<std::pair<std::string, int>> subgroup_lines;
  std::map<std::string, std::string> constants;
  std::vector<std::vector<RawEntry>> candidate_blocks;

  for (const auto& e : entries) {
    if (e.key.empty()) {
      if (e.section == "candidate") candidate_blocks.emplace_back();
      continue;
    }
    if (e.key == "subgroup.generators") {
      subgroup_lines.emplace_back(e.value, e.line);
      continue;
    }
    if (e.section == "group") {
      if (e.key == "name") {
        name = e.value;
      } else if (e.key == "generators") {
        std::vector<char> g;
        std::istringstream is(e.value);
        std::string tok;
        while (is >> tok) {
          if (tok.size() != 1) syntax(e.line, "generator \"" + tok + "\" is not a single letter");
          g.push_back(tok[0]);
        }
        if (g.empty()) syntax(e.line, "no generators listed");
        gens = g;
      } else if (e.key == "relators") {
        relators = std::make_pair(e.value, e.line);
      } else {
        syntax(e.line, "unknown key '" + e.key + "' in [group]");
      }
    } else if (e.section == "subgroup") {
      if (e.key != "generators") syntax(e.line, "unknown key '" + e.key + "' in [subgroup]");
      subgroup_lines.emplace_back(e.value, e.line);
    } else if (e.section == "constants") {
      constants[e.key] = e.value;
    } else if (e.section == "candidate") {
      if (candidate_blocks.empty()) candidate_blocks.emplace_back();
      candidate_blocks.back().push_back(e);
    }
  }
  if (!gens) fail(ErrorKind::Syntax, "missing 'generators' in [group]");
  Alphabet alpha(*gens);
  std::vector<Word> rels;
  if (relators) rels = parse_word_list(alpha, relators->first, relators->second, false);
  for (const auto& r : rels)
    if (free_reduce(r).empty())
      fail(ErrorKind::Input, "relator \"" + alpha.format(r) + "\" freely reduces to empty");

  InputSpec spec;
  spec.presentation = std::make_shared<GroupPresentation>(name, alpha, rels);
  for (const auto& [value, line] : subgroup_lines) {
    auto ws = parse_word_list(alpha, value, line, false);
    spec.subgroup_generators.insert(spec.subgroup_generators.end(), ws.begin(), ws.end());
  }
  spec.constants = constants;
  for (const auto& block : candidate_blocks) {
    CandidateSpec c;
    for (const auto& e : block) {
      if (e.key == "edge_generators")
        c.edge_generators = parse_word_list(alpha, e.value, e.line, false);
      else if (e.key == "lambda")
        c.lambda = e.value;
      else if (e.key == "epsilon")
        c.epsilon = e.value;
      else
        syntax(e.line, "unknown key '" + e.key + "' in [candidate]");
    }
    if (!c.edge_generators.empty()) spec.candidates.push_back(std::move(c));
  }
  return spec;
}

InputSpec load_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Input, "cannot open input file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_input(ss.str());
}

}  // namespace hyp

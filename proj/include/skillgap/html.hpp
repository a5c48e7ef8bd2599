#pragma once

// Offline extraction of job postings from saved HTML pages: a lenient HTML
// tree builder plus a small CSS selector engine (type, #id, .class,
// [attr], [attr=v], [attr~=v], [attr^=v], [attr$=v], [attr*=v], descendant
// and child combinators, comma-separated groups).

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "skillgap/corpus.hpp"
#include "skillgap/error.hpp"
#include "skillgap/text_normalize.hpp"

namespace skillgap::html {

struct Node {
  enum class Kind { Document, Element, Text } kind = Kind::Element;
  std::string tag;  // lowercase, elements only
  std::map<std::string, std::string> attrs;
  std::string text;  // text nodes only, entities decoded
  std::size_t parent = 0;
  std::vector<std::size_t> children;

  std::optional<std::string_view> attr(std::string_view name) const {
    auto it = attrs.find(std::string(name));
    if (it == attrs.end()) return std::nullopt;
    return std::string_view(it->second);
  }
};

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

/// Decodes the common named entities and all numeric references; anything
/// unrecognised is passed through verbatim.
inline std::string decode_entities(std::string_view s) {
  static const std::map<std::string, std::string, std::less<>> named = {
      {"amp", "&"},     {"lt", "<"},       {"gt", ">"},         {"quot", "\""},      {"apos", "'"},
      {"nbsp", " "},    {"pound", "\xC2\xA3"}, {"euro", "\xE2\x82\xAC"}, {"ndash", "\xE2\x80\x93"},
      {"mdash", "\xE2\x80\x94"}, {"hellip", "\xE2\x80\xA6"}, {"rsquo", "\xE2\x80\x99"}, {"lsquo", "\xE2\x80\x98"},
      {"copy", "\xC2\xA9"}};
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(s[i++]);
      continue;
    }
    const auto body = s.substr(i + 1, semi - i - 1);
    if (!body.empty() && body[0] == '#') {
      std::uint32_t cp = 0;
      bool ok = body.size() > 1;
      const bool hex = ok && (body[1] == 'x' || body[1] == 'X');
      for (std::size_t k = hex ? 2 : 1; ok && k < body.size(); ++k) {
        const char c = body[k];
        int v = -1;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
        if (v < 0) ok = false;
        else cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
      }
      if (ok && body.size() > (hex ? 2u : 1u)) {
        append_utf8(out, cp);
        i = semi + 1;
        continue;
      }
    } else if (auto it = named.find(body); it != named.end()) {
      out += it->second;
      i = semi + 1;
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

class Document {
 public:
  explicit Document(std::string_view source) {
    nodes_.push_back(Node{Node::Kind::Document, "", {}, "", 0, {}});
    parse(source);
  }

  const Node& node(std::size_t i) const { return nodes_.at(i); }
  std::size_t size() const { return nodes_.size(); }
  static constexpr std::size_t root() { return 0; }

  /// Text of all descendant text nodes; block boundaries become spaces and
  /// whitespace runs collapse to one space.
  std::string text_content(std::size_t i) const {
    std::string raw;
    collect_text(i, raw);
    std::string out;
    bool pending_space = false;
    for (char c : raw) {
      if (is_space_char(c)) {
        pending_space = true;
        continue;
      }
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
    return out;
  }

 private:
  static bool is_void(std::string_view tag) {
    static const std::set<std::string, std::less<>> v = {"area", "base", "br",    "col",  "embed",  "hr",    "img",
                                                         "input", "link", "meta", "param", "source", "track", "wbr"};
    return v.count(tag) > 0;
  }
  static bool is_raw_text(std::string_view tag) { return tag == "script" || tag == "style"; }
  static bool is_block(std::string_view tag) {
    static const std::set<std::string, std::less<>> b = {
        "address", "article", "aside", "blockquote", "br", "dd",  "div", "dl", "dt", "footer", "h1", "h2", "h3",
        "h4",      "h5",      "h6",    "header",     "hr", "li",  "main", "nav", "ol", "p",     "pre", "section",
        "table",   "td",      "th",    "tr",         "ul"};
    return b.count(tag) > 0;
  }
  // Opening `tag` implicitly closes an open element of one of these kinds.
  static std::vector<std::string_view> auto_closed_by(std::string_view tag) {
    if (tag == "p" || tag == "div" || tag == "ul" || tag == "ol" || tag == "table" || tag == "h1" || tag == "h2" ||
        tag == "h3" || tag == "section")
      return {"p"};
    if (tag == "li") return {"li"};
    if (tag == "dt" || tag == "dd") return {"dt", "dd"};
    if (tag == "tr") return {"tr", "td", "th"};
    if (tag == "td" || tag == "th") return {"td", "th"};
    if (tag == "option") return {"option"};
    return {};
  }

  void collect_text(std::size_t i, std::string& out) const {
    const auto& n = nodes_[i];
    if (n.kind == Node::Kind::Text) {
      out += n.text;
      return;
    }
    if (n.kind == Node::Kind::Element && is_raw_text(n.tag)) return;
    const bool block = n.kind == Node::Kind::Element && is_block(n.tag);
    if (block) out.push_back(' ');
    for (auto c : n.children) collect_text(c, out);
    if (block) out.push_back(' ');
  }

  std::size_t add(Node n) {
    n.parent = stack_.back();
    nodes_.push_back(std::move(n));
    const auto id = nodes_.size() - 1;
    nodes_[stack_.back()].children.push_back(id);
    return id;
  }

  void add_text(std::string_view raw) {
    if (raw.empty()) return;
    Node t;
    t.kind = Node::Kind::Text;
    t.text = decode_entities(raw);
    add(std::move(t));
  }

  void close(std::string_view tag) {
    for (std::size_t k = stack_.size(); k-- > 1;) {
      if (nodes_[stack_[k]].tag == tag) {
        stack_.resize(k);
        return;
      }
    }
  }

  void parse(std::string_view s) {
    stack_ = {0};
    std::size_t i = 0;
    std::size_t text_start = 0;
    while (i < s.size()) {
      if (s[i] != '<') {
        ++i;
        continue;
      }
      if (s.substr(i, 4) == "<!--") {
        add_text(s.substr(text_start, i - text_start));
        auto end = s.find("-->", i + 4);
        i = end == std::string_view::npos ? s.size() : end + 3;
        text_start = i;
        continue;
      }
      if (i + 1 < s.size() && (s[i + 1] == '!' || s[i + 1] == '?')) {
        add_text(s.substr(text_start, i - text_start));
        auto end = s.find('>', i);
        i = end == std::string_view::npos ? s.size() : end + 1;
        text_start = i;
        continue;
      }
      const bool closing = i + 1 < s.size() && s[i + 1] == '/';
      std::size_t j = i + (closing ? 2 : 1);
      const std::size_t name_start = j;
      while (j < s.size() && (is_word_char(s[j]) || s[j] == '-' || s[j] == ':')) ++j;
      if (j == name_start) {  // a stray '<' is text
        ++i;
        continue;
      }
      add_text(s.substr(text_start, i - text_start));
      const std::string tag = to_lower(s.substr(name_start, j - name_start));
      if (closing) {
        auto end = s.find('>', j);
        i = end == std::string_view::npos ? s.size() : end + 1;
        text_start = i;
        close(tag);
        continue;
      }
      Node el;
      el.tag = tag;
      bool self_closing = false;
      // attributes
      while (j < s.size() && s[j] != '>') {
        if (is_space_char(s[j])) {
          ++j;
          continue;
        }
        if (s[j] == '/') {
          self_closing = true;
          ++j;
          continue;
        }
        const std::size_t an = j;
        while (j < s.size() && !is_space_char(s[j]) && s[j] != '=' && s[j] != '>' && s[j] != '/') ++j;
        std::string name = to_lower(s.substr(an, j - an));
        std::string value;
        while (j < s.size() && is_space_char(s[j])) ++j;
        if (j < s.size() && s[j] == '=') {
          ++j;
          while (j < s.size() && is_space_char(s[j])) ++j;
          if (j < s.size() && (s[j] == '"' || s[j] == '\'')) {
            const char q = s[j++];
            const std::size_t vs = j;
            while (j < s.size() && s[j] != q) ++j;
            value = decode_entities(s.substr(vs, j - vs));
            if (j < s.size()) ++j;
          } else {
            const std::size_t vs = j;
            while (j < s.size() && !is_space_char(s[j]) && s[j] != '>') ++j;
            value = decode_entities(s.substr(vs, j - vs));
          }
        }
        if (!name.empty()) el.attrs.emplace(std::move(name), std::move(value));
        self_closing = false;
      }
      i = j < s.size() ? j + 1 : s.size();
      text_start = i;

      for (auto closed : auto_closed_by(tag)) {
        if (nodes_[stack_.back()].tag == closed) stack_.pop_back();
      }
      const auto id = add(std::move(el));
      if (is_void(tag) || self_closing) continue;
      if (is_raw_text(tag)) {
        const std::string end_tag = "</" + tag;
        std::size_t end = i;
        while (true) {
          end = s.find("</", end);
          if (end == std::string_view::npos || to_lower(s.substr(end, end_tag.size())) == end_tag) break;
          end += 2;
        }
        if (end == std::string_view::npos) end = s.size();
        Node t;
        t.kind = Node::Kind::Text;
        t.text = std::string(s.substr(i, end - i));
        stack_.push_back(id);
        add(std::move(t));
        stack_.pop_back();
        auto gt = s.find('>', end);
        i = gt == std::string_view::npos ? s.size() : gt + 1;
        text_start = i;
        continue;
      }
      stack_.push_back(id);
    }
    add_text(s.substr(text_start));
  }

  std::vector<Node> nodes_;
  std::vector<std::size_t> stack_;
};

// ---------------------------------------------------------------------------
// Selectors

struct AttrTest {
  std::string name;
  char op = 0;  // 0 = presence, '=', '~', '^', '$', '*'
  std::string value;
};

struct Compound {
  std::string tag;  // empty or "*" = any
  std::string id;
  std::vector<std::string> classes;
  std::vector<AttrTest> attrs;
};

struct Complex {
  std::vector<Compound> parts;
  std::vector<char> combinators;  // between parts[i] and parts[i+1]: ' ' or '>'
};

class Selector {
 public:
  explicit Selector(std::string_view text) : source_(text) { parse(text); }

  bool matches(const Document& doc, std::size_t node) const {
    for (const auto& c : alternatives_) {
      if (match_complex(doc, node, c, c.parts.size() - 1)) return true;
    }
    return false;
  }

  /// First element in document order matching the selector.
  std::optional<std::size_t> select_first(const Document& doc) const {
    std::vector<std::size_t> todo{Document::root()};
    while (!todo.empty()) {
      const auto i = todo.back();
      todo.pop_back();
      const auto& n = doc.node(i);
      if (n.kind == Node::Kind::Element && matches(doc, i)) return i;
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) todo.push_back(*it);
    }
    return std::nullopt;
  }

  const std::string& source() const { return source_; }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ArgumentError("selector '" + source_ + "': " + why);
  }

  static bool ident_char(char c) { return is_word_char(c) || c == '-' || c == '_'; }

  void parse(std::string_view s) {
    std::size_t i = 0;
    Complex cur;
    char pending = 0;
    auto skip_ws = [&] {
      bool any = false;
      while (i < s.size() && is_space_char(s[i])) ++i, any = true;
      return any;
    };
    auto ident = [&] {
      const std::size_t st = i;
      while (i < s.size() && ident_char(s[i])) ++i;
      if (st == i) fail("expected identifier at offset " + std::to_string(st));
      return std::string(s.substr(st, i - st));
    };
    skip_ws();
    while (i < s.size()) {
      Compound comp;
      bool any = false;
      if (s[i] == '*') {
        comp.tag = "*";
        ++i;
        any = true;
      } else if (ident_char(s[i])) {
        comp.tag = to_lower(ident());
        any = true;
      }
      while (i < s.size()) {
        if (s[i] == '#') {
          ++i;
          comp.id = ident();
        } else if (s[i] == '.') {
          ++i;
          comp.classes.push_back(ident());
        } else if (s[i] == '[') {
          ++i;
          skip_ws();
          AttrTest t;
          t.name = to_lower(ident());
          skip_ws();
          if (i < s.size() && s[i] != ']') {
            if (s[i] == '=') {
              t.op = '=';
              ++i;
            } else if (i + 1 < s.size() && s[i + 1] == '=' && std::string_view("~^$*").find(s[i]) != std::string_view::npos) {
              t.op = s[i];
              i += 2;
            } else {
              fail("bad attribute operator");
            }
            skip_ws();
            if (i < s.size() && (s[i] == '"' || s[i] == '\'')) {
              const char q = s[i++];
              const auto end = s.find(q, i);
              if (end == std::string_view::npos) fail("unterminated string");
              t.value = std::string(s.substr(i, end - i));
              i = end + 1;
            } else {
              t.value = ident();
            }
            skip_ws();
          }
          if (i >= s.size() || s[i] != ']') fail("expected ']'");
          ++i;
          comp.attrs.push_back(std::move(t));
        } else {
          break;
        }
        any = true;
      }
      if (!any) fail("empty compound selector at offset " + std::to_string(i));
      if (!cur.parts.empty()) cur.combinators.push_back(pending ? pending : ' ');
      cur.parts.push_back(std::move(comp));
      pending = 0;
      const bool ws = skip_ws();
      if (i >= s.size()) break;
      if (s[i] == ',') {
        ++i;
        alternatives_.push_back(std::move(cur));
        cur = {};
        skip_ws();
        if (i >= s.size()) fail("trailing ','");
        continue;
      }
      if (s[i] == '>') {
        pending = '>';
        ++i;
        skip_ws();
        if (i >= s.size()) fail("dangling '>'");
        continue;
      }
      if (!ws) fail("unexpected character '" + std::string(1, s[i]) + "'");
      pending = ' ';
    }
    if (cur.parts.empty()) fail("empty selector");
    alternatives_.push_back(std::move(cur));
  }

  static bool match_compound(const Node& n, const Compound& c) {
    if (n.kind != Node::Kind::Element) return false;
    if (!c.tag.empty() && c.tag != "*" && c.tag != n.tag) return false;
    if (!c.id.empty() && n.attr("id") != std::optional<std::string_view>(c.id)) return false;
    if (!c.classes.empty()) {
      const auto cls = n.attr("class");
      if (!cls) return false;
      for (const auto& want : c.classes) {
        if (!has_word(*cls, want)) return false;
      }
    }
    for (const auto& t : c.attrs) {
      const auto v = n.attr(t.name);
      if (!v) return false;
      switch (t.op) {
        case 0: break;
        case '=': if (*v != t.value) return false; break;
        case '~': if (!has_word(*v, t.value)) return false; break;
        case '^': if (v->substr(0, t.value.size()) != t.value) return false; break;
        case '$': if (v->size() < t.value.size() || v->substr(v->size() - t.value.size()) != t.value) return false; break;
        case '*': if (v->find(t.value) == std::string_view::npos) return false; break;
      }
    }
    return true;
  }

  static bool has_word(std::string_view list, std::string_view word) {
    std::size_t i = 0;
    while (i < list.size()) {
      while (i < list.size() && is_space_char(list[i])) ++i;
      const std::size_t st = i;
      while (i < list.size() && !is_space_char(list[i])) ++i;
      if (list.substr(st, i - st) == word) return true;
    }
    return false;
  }

  static bool match_complex(const Document& doc, std::size_t node, const Complex& c, std::size_t part) {
    if (!match_compound(doc.node(node), c.parts[part])) return false;
    if (part == 0) return true;
    const char comb = c.combinators[part - 1];
    std::size_t p = node;
    while (p != Document::root()) {
      p = doc.node(p).parent;
      if (p == Document::root() && doc.node(p).kind == Node::Kind::Document) return false;
      if (match_complex(doc, p, c, part - 1)) return true;
      if (comb == '>') return false;
    }
    return false;
  }

  std::string source_;
  std::vector<Complex> alternatives_;
};

// ---------------------------------------------------------------------------
// Job extraction

struct HtmlExtractConfig {
  std::string title;
  std::optional<std::string> city;
  std::optional<std::string> salary;
  std::string description;
};

inline HtmlExtractConfig parse_extract_config(const nlohmann::json& o) {
  if (!o.is_object()) throw InputError("html config: expected a JSON object");
  HtmlExtractConfig cfg;
  auto str = [&](const char* key) -> std::optional<std::string> {
    if (!o.contains(key) || o.at(key).is_null()) return std::nullopt;
    if (!o.at(key).is_string()) throw InputError(std::string("html config: '") + key + "' must be a string");
    return o.at(key).get<std::string>();
  };
  auto title = str("title");
  auto desc = str("description");
  if (!title || trim(*title).empty()) throw InputError("html config: 'title' selector is mandatory");
  if (!desc || trim(*desc).empty()) throw InputError("html config: 'description' selector is mandatory");
  cfg.title = *title;
  cfg.description = *desc;
  cfg.city = str("city");
  cfg.salary = str("salary");
  for (const auto& s : {std::optional(cfg.title), std::optional(cfg.description), cfg.city, cfg.salary}) {
    if (s) Selector{*s};  // validates syntax
  }
  return cfg;
}

/// FNV-1a over the page, used as a stable id when none is supplied.
inline std::string content_id(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "html-%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline JobPosting extract_job_from_html(std::string_view page, const HtmlExtractConfig& config,
                                        std::string id = {}) {
  const Document doc(page);
  auto pick = [&](const std::string& selector) -> std::optional<std::string> {
    const Selector sel(selector);
    const auto hit = sel.select_first(doc);
    if (!hit) return std::nullopt;
    return doc.text_content(*hit);
  };
  auto title = pick(config.title);
  if (!title) throw InputError("title: no match for selector '" + config.title + "'");
  auto desc = pick(config.description);
  if (!desc) throw InputError("description: no match for selector '" + config.description + "'");

  JobPosting p;
  p.id = id.empty() ? content_id(page) : std::move(id);
  p.title = *title;
  p.description = *desc;
  if (p.description.empty()) throw InputError("description: matched node has no text");
  if (config.city) p.location = pick(*config.city).value_or("");
  p.city = extract_city(p.location);
  if (config.salary) {
    if (auto s = pick(*config.salary); s && !s->empty()) p.salary_text = *s;
  }
  p.nature = classify_nature(p.location, p.description);
  p.family = classify_family(p.title);
  return p;
}

}  // namespace skillgap::html

#pragma once

// Error-recovering HTML parser producing element-only DOM trees.
//
// The tree construction follows the WHATWG HTML parsing algorithm closely
// enough that real-world markup yields the same element structure a browser
// would build: implied html/head/body, implied end tags, table fixups
// (implicit tbody/tr, foster parenting), the active formatting element list
// and the adoption agency algorithm. Text, comments, doctypes and attributes
// are consumed but not kept.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "tkndd/dom_tree.hpp"
#include "tkndd/errors.hpp"

namespace tkndd {

struct ParseOptions {
  // Maximum tree depth, counted in nodes (html alone has depth 1).
  std::size_t max_depth = 512;
};

namespace html_detail {

inline bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\f' || c == '\r'; }
inline bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

inline bool one_of(std::string_view name, std::initializer_list<std::string_view> set) {
  return std::find(set.begin(), set.end(), name) != set.end();
}

struct Token {
  enum class Kind { StartTag, EndTag, Text, Doctype, Eof };
  Kind kind = Kind::Eof;
  std::string name;
  bool self_closing = false;
  bool has_non_ws = false;  // Text only
  std::string type_attr;    // value of a `type` attribute, lowercased
  bool quirks = false;      // Doctype only
  bool font_breakout = false;  // <font> with color, face or size
};

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view input) : in_(input) {
    if (in_.substr(0, 3) == "\xEF\xBB\xBF") in_.remove_prefix(3);
  }

  // Content of the element just opened is raw text up to its end tag.
  void enter_raw_text(std::string tag) { raw_end_ = std::move(tag); }
  void enter_plain_text() { plain_ = true; }

  Token next() {
    for (;;) {
      if (pos_ >= in_.size()) return Token{};
      if (plain_) return text_until(in_.size());
      if (!raw_end_.empty()) {
        const std::size_t end = find_raw_end();
        raw_end_.clear();
        if (end > pos_) return text_until(end);
        continue;
      }
      if (in_[pos_] != '<') return text_until(find_lt(pos_));

      const std::size_t lt = pos_;
      const char c1 = at(lt + 1);
      if (c1 == '!') {
        if (Token t; read_doctype(t)) return t;
        skip_markup_declaration();
        continue;
      }
      if (c1 == '?') {
        skip_to_gt(lt + 2);
        continue;
      }
      if (c1 == '/') {
        const char c2 = at(lt + 2);
        if (is_alpha(c2)) {
          Token t;
          t.kind = Token::Kind::EndTag;
          if (read_tag(lt + 2, t)) return t;
          return Token{};
        }
        if (c2 == '>') {
          pos_ = lt + 3;
          continue;
        }
        if (lt + 2 >= in_.size()) return text_until(in_.size());
        skip_to_gt(lt + 2);
        continue;
      }
      if (is_alpha(c1)) {
        Token t;
        t.kind = Token::Kind::StartTag;
        if (read_tag(lt + 1, t)) return t;
        return Token{};
      }
      // A lone '<' is character data.
      return text_until(find_lt(lt + 1));
    }
  }

 private:
  char at(std::size_t i) const { return i < in_.size() ? in_[i] : '\0'; }

  std::size_t find_lt(std::size_t from) const {
    const auto p = in_.find('<', from);
    return p == std::string_view::npos ? in_.size() : p;
  }

  Token text_until(std::size_t end) {
    Token t;
    t.kind = Token::Kind::Text;
    for (std::size_t i = pos_; i < end; ++i)
      if (!is_ws(in_[i])) {
        t.has_non_ws = true;
        break;
      }
    pos_ = end;
    return t;
  }

  void skip_to_gt(std::size_t from) {
    const auto p = in_.find('>', from);
    pos_ = p == std::string_view::npos ? in_.size() : p + 1;
  }

  void skip_markup_declaration() {
    const std::size_t start = pos_ + 2;
    if (in_.substr(start, 2) == "--") {
      std::size_t p = start + 2;
      if (at(p) == '>') {
        pos_ = p + 1;
        return;
      }
      if (at(p) == '-' && at(p + 1) == '>') {
        pos_ = p + 2;
        return;
      }
      for (; p < in_.size(); ++p) {
        if (in_.substr(p, 3) == "-->") {
          pos_ = p + 3;
          return;
        }
        if (in_.substr(p, 4) == "--!>") {
          pos_ = p + 4;
          return;
        }
      }
      pos_ = in_.size();
      return;
    }
    // DOCTYPE, CDATA outside foreign content and bogus comments.
    skip_to_gt(start);
  }

  static bool istarts_with(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i)
      if (lower(s[i]) != lower(prefix[i])) return false;
    return true;
  }

  // `<!DOCTYPE ...>`. Decides only between quirks and no-quirks mode; the
  // only tree-shape difference is whether <table> closes an open <p>.
  bool read_doctype(Token& t) {
    if (!istarts_with(in_.substr(pos_ + 2), "doctype")) return false;
    const auto gt = in_.find('>', pos_ + 9);
    const std::string_view body =
        in_.substr(pos_ + 9, gt == std::string_view::npos ? std::string_view::npos : gt - pos_ - 9);
    pos_ = gt == std::string_view::npos ? in_.size() : gt + 1;
    t.kind = Token::Kind::Doctype;

    std::size_t i = 0;
    while (i < body.size() && is_ws(body[i])) ++i;
    std::string name;
    while (i < body.size() && !is_ws(body[i])) name += lower(body[i++]);
    const std::string_view rest = body.substr(i);
    auto quoted = [](std::string_view s, std::size_t from) -> std::string {
      const auto q = s.find_first_of("\"'", from);
      if (q == std::string_view::npos) return {};
      const auto e = s.find(s[q], q + 1);
      return std::string(s.substr(q + 1, e == std::string_view::npos ? std::string_view::npos : e - q - 1));
    };
    std::string lowered(rest);
    for (char& ch : lowered) ch = lower(ch);
    std::string public_id;
    bool has_system = false;
    if (const auto p = lowered.find("public"); p != std::string::npos) {
      public_id = quoted(rest, p);
      for (char& ch : public_id) ch = lower(ch);
      const auto first = rest.find_first_of("\"'", p);
      const auto close = first == std::string_view::npos ? first : rest.find(rest[first], first + 1);
      has_system = close != std::string_view::npos &&
                   rest.find_first_of("\"'", close + 1) != std::string_view::npos;
    }
    t.quirks = name != "html" || istarts_with(public_id, "-//w3o//dtd w3 html strict 3.0//en//") ||
               istarts_with(public_id, "-//ietf//") || istarts_with(public_id, "-//w3c//dtd html 3") ||
               istarts_with(public_id, "-//w3c//dtd html 2") ||
               istarts_with(public_id, "-//netscape comm. corp.//") ||
               istarts_with(public_id, "-//microsoft//") || istarts_with(public_id, "-//softquad") ||
               istarts_with(public_id, "-//sun microsystems corp.//") ||
               istarts_with(public_id, "-//webtechs//") ||
               (!has_system && (istarts_with(public_id, "-//w3c//dtd html 4.01 frameset//") ||
                                istarts_with(public_id, "-//w3c//dtd html 4.01 transitional//")));
    return true;
  }

  // Reads a tag whose name starts at `p`. Returns false on EOF inside the tag,
  // in which case the tag is dropped.
  bool read_tag(std::size_t p, Token& t) {
    while (p < in_.size() && !is_ws(in_[p]) && in_[p] != '/' && in_[p] != '>')
      t.name += lower(in_[p++]);
    for (;;) {
      while (p < in_.size() && is_ws(in_[p])) ++p;
      if (p >= in_.size()) {
        pos_ = in_.size();
        return false;
      }
      const char c = in_[p];
      if (c == '>') {
        pos_ = p + 1;
        return true;
      }
      if (c == '/') {
        if (at(p + 1) == '>') {
          t.self_closing = true;
          pos_ = p + 2;
          return true;
        }
        ++p;
        continue;
      }
      // Attribute name (a leading '=' belongs to the name).
      std::string attr;
      attr += lower(in_[p++]);
      while (p < in_.size() && !is_ws(in_[p]) && in_[p] != '/' && in_[p] != '>' && in_[p] != '=')
        attr += lower(in_[p++]);
      while (p < in_.size() && is_ws(in_[p])) ++p;
      if (attr == "color" || attr == "face" || attr == "size") t.font_breakout = true;
      if (at(p) != '=') continue;
      ++p;
      while (p < in_.size() && is_ws(in_[p])) ++p;
      std::string value;
      const char q = at(p);
      if (q == '"' || q == '\'') {
        const auto close = in_.find(q, p + 1);
        if (close == std::string_view::npos) {
          pos_ = in_.size();
          return false;
        }
        value = std::string(in_.substr(p + 1, close - p - 1));
        p = close + 1;
      } else {
        while (p < in_.size() && !is_ws(in_[p]) && in_[p] != '>') value += in_[p++];
      }
      if (attr == "type" && t.type_attr.empty()) {
        for (char& ch : value) ch = lower(ch);
        t.type_attr = std::move(value);
      }
    }
  }

  std::size_t find_raw_end() const {
    for (std::size_t p = in_.find("</", pos_); p != std::string_view::npos;
         p = in_.find("</", p + 1)) {
      const std::size_t n = raw_end_.size();
      if (p + 2 + n > in_.size()) break;
      bool match = true;
      for (std::size_t i = 0; i < n && match; ++i) match = lower(in_[p + 2 + i]) == raw_end_[i];
      if (!match) continue;
      const char after = at(p + 2 + n);
      if (is_ws(after) || after == '/' || after == '>') return p;
    }
    return in_.size();
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  std::string raw_end_;
  bool plain_ = false;
};

class TreeBuilder {
 public:
  explicit TreeBuilder(Tokenizer& tok) : tok_(tok) { nodes_.push_back(Node{"#document", -1, {}, Ns::Html}); }

  void run() {
    for (;;) {
      Token t = tok_.next();
      if (t.kind == Token::Kind::Eof) break;
      if (t.kind == Token::Kind::Doctype) {
        if (mode_ == Mode::BeforeHtml && !seen_content_) quirks_ = t.quirks;
        continue;
      }
      seen_content_ = seen_content_ || t.kind != Token::Kind::Text || t.has_non_ws;
      dispatch(t);
    }
    if (mode_ == Mode::Text) finish_text();
    if (one_of_mode({Mode::BeforeHtml, Mode::BeforeHead, Mode::InHead, Mode::AfterHead})) {
      // End of input before any body content: the implied elements still get
      // created, exactly as for stray character data.
      Token eof;
      eof.kind = Token::Kind::Text;
      eof.has_non_ws = true;
      dispatch(eof);
    }
  }

  DomTree to_tree(std::string source_id) const {
    return DomTree::build(
        html_, [this](int n) -> std::string_view { return nodes_[n].name; },
        [this](int n) -> const std::vector<int>& { return nodes_[n].children; },
        std::move(source_id));
  }

 private:
  enum class Mode {
    BeforeHtml,
    BeforeHead,
    InHead,
    AfterHead,
    InBody,
    Text,
    InTable,
    InCaption,
    InColumnGroup,
    InTableBody,
    InRow,
    InCell,
    InSelect,
    AfterBody,
    InFrameset,
    AfterFrameset,
  };

  enum class Ns { Html, Svg, MathMl };

  struct Node {
    std::string name;
    int parent;
    std::vector<int> children;
    Ns ns;
  };

  static constexpr int kMarker = -1;

  // ---- tree primitives --------------------------------------------------

  const std::string& name(int n) const { return nodes_[n].name; }
  int current() const { return stack_.empty() ? 0 : stack_.back(); }
  bool current_is(std::string_view tag) const {
    return !stack_.empty() && !is_foreign(current()) && name(current()) == tag;
  }

  bool is_foreign(int n) const { return nodes_[n].ns != Ns::Html; }

  int create(const std::string& tag, Ns ns = Ns::Html) {
    nodes_.push_back(Node{tag, -1, {}, ns});
    return static_cast<int>(nodes_.size()) - 1;
  }

  void detach(int n) {
    const int p = nodes_[n].parent;
    if (p < 0) return;
    auto& kids = nodes_[p].children;
    kids.erase(std::find(kids.begin(), kids.end(), n));
    nodes_[n].parent = -1;
  }

  void append(int parent, int n) {
    detach(n);
    nodes_[parent].children.push_back(n);
    nodes_[n].parent = parent;
  }

  void insert_before(int parent, int ref, int n) {
    detach(n);
    auto& kids = nodes_[parent].children;
    kids.insert(std::find(kids.begin(), kids.end(), ref), n);
    nodes_[n].parent = parent;
  }

  static bool is_table_context(std::string_view n) {
    return one_of(n, {"table", "tbody", "tfoot", "thead", "tr"});
  }

  // Places `n` at the appropriate insertion location relative to `target`.
  void place(int target, int n) {
    if (foster_ && !is_foreign(target) && is_table_context(name(target))) {
      for (auto i = static_cast<std::ptrdiff_t>(stack_.size()) - 1; i >= 0; --i) {
        const int e = stack_[static_cast<std::size_t>(i)];
        if (name(e) == "table" && !is_foreign(e)) {
          if (nodes_[e].parent >= 0)
            insert_before(nodes_[e].parent, e, n);
          else
            append(stack_[static_cast<std::size_t>(i) - 1], n);
          return;
        }
      }
      append(stack_.front(), n);
      return;
    }
    append(target, n);
  }

  int insert(const std::string& tag, Ns ns = Ns::Html) {
    const int n = create(tag, ns);
    place(current(), n);
    stack_.push_back(n);
    return n;
  }

  void insert_void(const std::string& tag) {
    insert(tag);
    stack_.pop_back();
  }

  void insert_raw_text(const Token& t) {
    insert(t.name);
    tok_.enter_raw_text(t.name);
    original_ = mode_;
    mode_ = Mode::Text;
  }

  void pop_until(std::string_view tag) {
    while (!stack_.empty()) {
      const int n = stack_.back();
      stack_.pop_back();
      if (name(n) == tag && !is_foreign(n)) return;
    }
  }

  void pop_until_any(std::initializer_list<std::string_view> tags) {
    while (!stack_.empty()) {
      const int n = stack_.back();
      stack_.pop_back();
      if (!is_foreign(n) && one_of(name(n), tags)) return;
    }
  }

  void clear_to(std::initializer_list<std::string_view> tags) {
    while (!stack_.empty() && !one_of(name(current()), tags)) stack_.pop_back();
  }

  bool in_stack(int n) const { return std::find(stack_.begin(), stack_.end(), n) != stack_.end(); }

  // ---- scopes -----------------------------------------------------------

  enum class Scope { Default, ListItem, Button, Table, Select };

  bool is_scope_boundary(int n, Scope scope) const {
    const std::string& t = name(n);
    if (is_foreign(n)) {
      if (scope == Scope::Table || scope == Scope::Select) return false;
      return is_foreign_special(n);
    }
    switch (scope) {
      case Scope::Table:
        return one_of(t, {"html", "table", "template"});
      case Scope::Select:
        return !one_of(t, {"optgroup", "option"});
      default:
        break;
    }
    if (one_of(t, {"applet", "caption", "html", "table", "td", "th", "marquee", "object",
                   "template"}))
      return true;
    if (scope == Scope::ListItem && one_of(t, {"ol", "ul"})) return true;
    if (scope == Scope::Button && t == "button") return true;
    return false;
  }

  bool in_scope(std::initializer_list<std::string_view> tags, Scope scope = Scope::Default) const {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      if (!is_foreign(*it) && one_of(name(*it), tags)) return true;
      if (is_scope_boundary(*it, scope)) return false;
    }
    return false;
  }

  bool in_scope_node(int n) const {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      if (*it == n) return true;
      if (is_scope_boundary(*it, Scope::Default)) return false;
    }
    return false;
  }

  bool template_open() const {
    return std::any_of(stack_.begin(), stack_.end(),
                       [&](int n) { return !is_foreign(n) && name(n) == "template"; });
  }

  bool in_scope(std::string_view tag, Scope scope = Scope::Default) const {
    return in_scope({tag}, scope);
  }

  static bool is_special(std::string_view t) {
    return one_of(
        t, {"address", "applet",   "area",     "article",  "aside",    "base",     "basefont",
            "bgsound", "blockquote", "body",   "br",       "button",   "caption",  "center",
            "col",     "colgroup", "dd",       "details",  "dir",      "div",      "dl",
            "dt",      "embed",    "fieldset", "figcaption", "figure", "footer",   "form",
            "frame",   "frameset", "h1",       "h2",       "h3",       "h4",       "h5",
            "h6",      "head",     "header",   "hgroup",   "hr",       "html",     "iframe",
            "img",     "input",    "keygen",   "li",       "link",     "listing",  "main",
            "marquee", "menu",     "meta",     "nav",      "noembed",  "noframes", "noscript",
            "object",  "ol",       "p",        "param",    "plaintext", "pre",     "script",
            "search",  "section",  "select",   "source",   "style",    "summary",  "table",
            "tbody",   "td",       "template", "textarea", "tfoot",    "th",       "thead",
            "title",   "tr",       "track",    "ul",       "wbr",      "xmp"});
  }

  bool is_special_node(int n) const {
    if (is_foreign(n)) return is_foreign_special(n);
    return is_special(name(n));
  }

  void generate_implied_end_tags(std::string_view except = {}) {
    while (!stack_.empty()) {
      const std::string& t = name(current());
      if (t == except || is_foreign(current()) ||
          !one_of(t, {"dd", "dt", "li", "optgroup", "option", "p", "rb", "rp", "rt", "rtc"}))
        return;
      stack_.pop_back();
    }
  }

  void close_p() {
    generate_implied_end_tags("p");
    pop_until("p");
  }

  void close_p_in_button_scope() {
    if (in_scope("p", Scope::Button)) close_p();
  }

  // ---- active formatting elements --------------------------------------

  static bool is_formatting(std::string_view t) {
    return one_of(t, {"a", "b", "big", "code", "em", "font", "i", "nobr", "s", "small", "strike",
                      "strong", "tt", "u"});
  }

  void reconstruct_formatting() {
    if (formatting_.empty()) return;
    if (formatting_.back() == kMarker || in_stack(formatting_.back())) return;
    std::size_t i = formatting_.size() - 1;
    while (i > 0) {
      const int e = formatting_[i - 1];
      if (e == kMarker || in_stack(e)) break;
      --i;
    }
    for (; i < formatting_.size(); ++i) formatting_[i] = insert(name(formatting_[i]));
  }

  void clear_formatting_to_marker() {
    while (!formatting_.empty()) {
      const int e = formatting_.back();
      formatting_.pop_back();
      if (e == kMarker) return;
    }
  }

  std::ptrdiff_t formatting_index(int n) const {
    const auto it = std::find(formatting_.begin(), formatting_.end(), n);
    return it == formatting_.end() ? -1 : it - formatting_.begin();
  }

  // Returns false when the end tag must be handled like any other end tag.
  bool adoption_agency(const std::string& subject) {
    if (current_is(subject) && formatting_index(current()) < 0) {
      stack_.pop_back();
      return true;
    }
    for (int outer = 0; outer < 8; ++outer) {
      int fmt = -1;
      for (auto it = formatting_.rbegin(); it != formatting_.rend() && *it != kMarker; ++it)
        if (name(*it) == subject) {
          fmt = *it;
          break;
        }
      if (fmt < 0) return false;

      const auto fmt_stack = std::find(stack_.begin(), stack_.end(), fmt);
      if (fmt_stack == stack_.end()) {
        formatting_.erase(formatting_.begin() + formatting_index(fmt));
        return true;
      }
      if (!in_scope(subject)) return true;

      const auto fmt_pos = static_cast<std::size_t>(fmt_stack - stack_.begin());
      int furthest = -1;
      std::size_t furthest_pos = 0;
      for (std::size_t i = fmt_pos + 1; i < stack_.size(); ++i)
        if (is_special_node(stack_[i])) {
          furthest = stack_[i];
          furthest_pos = i;
          break;
        }
      if (furthest < 0) {
        stack_.resize(fmt_pos);
        formatting_.erase(formatting_.begin() + formatting_index(fmt));
        return true;
      }

      const int common_ancestor = stack_[fmt_pos - 1];
      auto bookmark = formatting_index(fmt);
      int node = furthest;
      int last = furthest;
      std::size_t node_pos = furthest_pos;
      for (int inner = 1;; ++inner) {
        --node_pos;
        node = stack_[node_pos];
        if (node == fmt) break;
        auto fi = formatting_index(node);
        if (inner > 3 && fi >= 0) {
          formatting_.erase(formatting_.begin() + fi);
          if (fi < bookmark) --bookmark;
          fi = -1;
        }
        if (fi < 0) {
          stack_.erase(stack_.begin() + static_cast<std::ptrdiff_t>(node_pos));
          continue;
        }
        const int fresh = create(name(node));
        formatting_[static_cast<std::size_t>(fi)] = fresh;
        stack_[node_pos] = fresh;
        node = fresh;
        if (last == furthest) bookmark = fi + 1;
        append(node, last);
        last = node;
      }

      if (!is_foreign(common_ancestor) && is_table_context(name(common_ancestor))) {
        const bool saved = foster_;
        foster_ = true;
        place(common_ancestor, last);
        foster_ = saved;
      } else {
        append(common_ancestor, last);
      }

      const int fresh = create(name(fmt));
      const std::vector<int> moved = nodes_[furthest].children;
      for (int c : moved) append(fresh, c);
      append(furthest, fresh);

      const auto old = formatting_index(fmt);
      formatting_.erase(formatting_.begin() + old);
      if (old < bookmark) --bookmark;
      formatting_.insert(formatting_.begin() + bookmark, fresh);

      stack_.erase(std::find(stack_.begin(), stack_.end(), fmt));
      const auto fb = std::find(stack_.begin(), stack_.end(), furthest);
      stack_.insert(fb + 1, fresh);
    }
    return true;
  }

  // ---- insertion mode reset --------------------------------------------

  void reset_insertion_mode() {
    for (auto i = static_cast<std::ptrdiff_t>(stack_.size()) - 1; i >= 0; --i) {
      const int n = stack_[static_cast<std::size_t>(i)];
      const bool last = i == 0;
      const std::string& t = name(n);
      if (t == "select") return void(mode_ = Mode::InSelect);
      if ((t == "td" || t == "th") && !last) return void(mode_ = Mode::InCell);
      if (t == "tr") return void(mode_ = Mode::InRow);
      if (one_of(t, {"tbody", "thead", "tfoot"})) return void(mode_ = Mode::InTableBody);
      if (t == "caption") return void(mode_ = Mode::InCaption);
      if (t == "colgroup") return void(mode_ = Mode::InColumnGroup);
      if (t == "table") return void(mode_ = Mode::InTable);
      if (t == "head" && !last) return void(mode_ = Mode::InHead);
      if (t == "body") return void(mode_ = Mode::InBody);
      if (t == "frameset") return void(mode_ = Mode::InFrameset);
      if (t == "html") return void(mode_ = head_ < 0 ? Mode::BeforeHead : Mode::AfterHead);
      if (last) return void(mode_ = Mode::InBody);
    }
    mode_ = Mode::InBody;
  }

  // ---- dispatch ---------------------------------------------------------

  bool foreign_current() const { return !stack_.empty() && is_foreign(current()); }

  bool html_integration_point(int n) const {
    if (nodes_[n].ns == Ns::Svg) return one_of(name(n), {"foreignobject", "desc", "title"});
    if (nodes_[n].ns == Ns::MathMl) return one_of(name(n), {"mi", "mo", "mn", "ms", "mtext"});
    return false;
  }

  bool is_foreign_special(int n) const {
    if (nodes_[n].ns == Ns::Svg) return one_of(name(n), {"foreignobject", "desc", "title"});
    if (nodes_[n].ns == Ns::MathMl)
      return one_of(name(n), {"mi", "mo", "mn", "ms", "mtext", "annotation-xml"});
    return false;
  }

  void dispatch(const Token& t) {
    if (foreign_current() && (t.kind == Token::Kind::EndTag ||
                              (t.kind == Token::Kind::StartTag && !html_integration_point(current())))) {
      if (process_foreign(t)) return;
    }
    process(t);
  }

  static bool breaks_out_of_foreign(const Token& t) {
    return one_of(t.name, {"b",      "big",   "blockquote", "body", "br",     "center", "code",
                           "dd",     "div",   "dl",         "dt",   "em",     "embed",  "h1",
                           "h2",     "h3",    "h4",         "h5",   "h6",     "head",   "hr",
                           "i",      "img",   "li",         "listing", "menu", "meta",  "nobr",
                           "ol",     "p",     "pre",        "ruby", "s",      "small",  "span",
                           "strong", "strike", "sub",       "sup",  "table",  "tt",     "u",
                           "ul",     "var"});
  }

  // Rules for tokens inside SVG/MathML. Returns true when consumed.
  bool process_foreign(const Token& t) {
    if (t.kind == Token::Kind::StartTag) {
      if (breaks_out_of_foreign(t) || (t.name == "font" && t.font_breakout)) {
        while (foreign_current() && !html_integration_point(current())) stack_.pop_back();
        return false;
      }
      insert(t.name, nodes_[current()].ns);
      if (t.self_closing) stack_.pop_back();
      return true;
    }
    // End tag.
    if (t.name == "br" || t.name == "p") {
      while (foreign_current() && !html_integration_point(current())) stack_.pop_back();
      return false;
    }
    for (auto i = static_cast<std::ptrdiff_t>(stack_.size()) - 1; i > 0; --i) {
      const int n = stack_[static_cast<std::size_t>(i)];
      if (!is_foreign(n)) return false;
      if (name(n) == t.name) {
        stack_.resize(static_cast<std::size_t>(i));
        return true;
      }
    }
    return true;
  }

  void process(const Token& t) {
    switch (mode_) {
      case Mode::BeforeHtml:
        return before_html(t);
      case Mode::BeforeHead:
        return before_head(t);
      case Mode::InHead:
        return in_head(t);
      case Mode::AfterHead:
        return after_head(t);
      case Mode::InBody:
        return in_body(t);
      case Mode::Text:
        if (t.kind == Token::Kind::EndTag) finish_text();
        return;
      case Mode::InTable:
        return in_table(t);
      case Mode::InCaption:
        return in_caption(t);
      case Mode::InColumnGroup:
        return in_column_group(t);
      case Mode::InTableBody:
        return in_table_body(t);
      case Mode::InRow:
        return in_row(t);
      case Mode::InCell:
        return in_cell(t);
      case Mode::InSelect:
        return in_select(t);
      case Mode::AfterBody:
        return after_body(t);
      case Mode::InFrameset:
        return in_frameset(t);
      case Mode::AfterFrameset:
        return;
    }
  }

  bool one_of_mode(std::initializer_list<Mode> modes) const {
    return std::find(modes.begin(), modes.end(), mode_) != modes.end();
  }

  void finish_text() {
    stack_.pop_back();
    mode_ = original_;
    if (head_reopened_) {
      stack_.erase(std::find(stack_.begin(), stack_.end(), head_));
      head_reopened_ = false;
    }
  }

  static bool is_start(const Token& t, std::string_view n) {
    return t.kind == Token::Kind::StartTag && t.name == n;
  }
  static bool is_end(const Token& t, std::string_view n) {
    return t.kind == Token::Kind::EndTag && t.name == n;
  }
  static bool is_ws_text(const Token& t) { return t.kind == Token::Kind::Text && !t.has_non_ws; }

  void before_html(const Token& t) {
    if (is_ws_text(t)) return;
    if (t.kind == Token::Kind::EndTag && !one_of(t.name, {"head", "body", "html", "br"})) return;
    html_ = create("html");
    append(0, html_);
    stack_.push_back(html_);
    mode_ = Mode::BeforeHead;
    if (is_start(t, "html")) return;
    process(t);
  }

  void before_head(const Token& t) {
    if (is_ws_text(t) || is_start(t, "html")) return;
    if (t.kind == Token::Kind::EndTag && !one_of(t.name, {"head", "body", "html", "br"})) return;
    head_ = insert("head");
    mode_ = Mode::InHead;
    if (is_start(t, "head")) return;
    process(t);
  }

  // Start tags that belong to the document head.
  bool head_start_tag(const Token& t) {
    if (t.kind != Token::Kind::StartTag) return false;
    if (one_of(t.name, {"base", "basefont", "bgsound", "link", "meta"})) {
      insert_void(t.name);
      return true;
    }
    if (one_of(t.name, {"title", "noscript", "noframes", "style", "script"})) {
      insert_raw_text(t);
      return true;
    }
    if (t.name == "template") {
      insert(t.name);
      formatting_.push_back(kMarker);
      mode_ = Mode::InBody;
      return true;
    }
    return false;
  }

  void in_head(const Token& t) {
    if (is_ws_text(t) || is_start(t, "html") || is_start(t, "head")) return;
    if (head_start_tag(t)) return;
    if (is_end(t, "template")) return end_template();
    if (is_end(t, "head")) {
      stack_.pop_back();
      mode_ = Mode::AfterHead;
      return;
    }
    if (t.kind == Token::Kind::EndTag && !one_of(t.name, {"body", "html", "br"})) return;
    pop_until("head");
    mode_ = Mode::AfterHead;
    process(t);
  }

  void end_template() {
    if (std::none_of(stack_.begin(), stack_.end(), [&](int n) { return name(n) == "template"; }))
      return;
    generate_implied_end_tags();
    pop_until("template");
    clear_formatting_to_marker();
    reset_insertion_mode();
  }

  void after_head(const Token& t) {
    if (is_ws_text(t) || is_start(t, "html") || is_start(t, "head")) return;
    if (is_start(t, "body")) {
      insert("body");
      mode_ = Mode::InBody;
      return;
    }
    if (is_start(t, "frameset")) {
      insert("frameset");
      mode_ = Mode::InFrameset;
      return;
    }
    if (t.kind == Token::Kind::StartTag &&
        one_of(t.name, {"base", "basefont", "bgsound", "link", "meta", "noframes", "script",
                        "style", "template", "title"})) {
      stack_.push_back(head_);
      const std::size_t depth = stack_.size();
      head_start_tag(t);
      // Raw-text elements stay open until their end tag; head is taken off
      // the stack once that element closes.
      if (stack_.size() == depth)
        stack_.erase(std::find(stack_.begin(), stack_.end(), head_));
      else
        head_reopened_ = true;
      return;
    }
    if (is_end(t, "template")) return end_template();
    if (t.kind == Token::Kind::EndTag && !one_of(t.name, {"body", "html", "br"})) return;
    insert("body");
    mode_ = Mode::InBody;
    process(t);
  }

  void in_body(const Token& t) {
    if (t.kind == Token::Kind::Text) {
      reconstruct_formatting();
      return;
    }
    if (t.kind == Token::Kind::StartTag) return in_body_start(t);
    in_body_end(t);
  }

  void in_body_start(const Token& t) {
    const std::string& n = t.name;
    if (n == "html" || n == "body" || n == "frameset") return;
    if (head_start_tag(t)) return;
    if (one_of(n, {"address", "article", "aside", "blockquote", "center", "details", "dialog",
                   "dir", "div", "dl", "fieldset", "figcaption", "figure", "footer", "header",
                   "hgroup", "main", "menu", "nav", "ol", "p", "search", "section", "summary",
                   "ul"})) {
      close_p_in_button_scope();
      insert(n);
      return;
    }
    if (one_of(n, {"h1", "h2", "h3", "h4", "h5", "h6"})) {
      close_p_in_button_scope();
      if (!foreign_current() && one_of(name(current()), {"h1", "h2", "h3", "h4", "h5", "h6"}))
        stack_.pop_back();
      insert(n);
      return;
    }
    if (n == "pre" || n == "listing") {
      close_p_in_button_scope();
      insert(n);
      return;
    }
    if (n == "form") {
      if (form_ >= 0 && !template_open()) return;
      close_p_in_button_scope();
      const int f = insert(n);
      if (!template_open()) form_ = f;
      return;
    }
    if (n == "li" || n == "dd" || n == "dt") {
      for (auto i = static_cast<std::ptrdiff_t>(stack_.size()) - 1; i >= 0; --i) {
        const int node = stack_[static_cast<std::size_t>(i)];
        const std::string& nn = name(node);
        const bool match = n == "li" ? nn == "li" : (nn == "dd" || nn == "dt");
        if (match) {
          generate_implied_end_tags(nn);
          pop_until(nn);
          break;
        }
        if (is_special_node(node) && !one_of(nn, {"address", "div", "p"})) break;
      }
      close_p_in_button_scope();
      insert(n);
      return;
    }
    if (n == "plaintext") {
      close_p_in_button_scope();
      insert(n);
      tok_.enter_plain_text();
      return;
    }
    if (n == "button") {
      if (in_scope("button")) {
        generate_implied_end_tags();
        pop_until("button");
      }
      reconstruct_formatting();
      insert(n);
      return;
    }
    if (n == "a") {
      for (auto it = formatting_.rbegin(); it != formatting_.rend() && *it != kMarker; ++it) {
        if (name(*it) == "a") {
          const int a = *it;
          adoption_agency("a");
          if (const auto fi = formatting_index(a); fi >= 0) formatting_.erase(formatting_.begin() + fi);
          if (const auto si = std::find(stack_.begin(), stack_.end(), a); si != stack_.end())
            stack_.erase(si);
          break;
        }
      }
      reconstruct_formatting();
      formatting_.push_back(insert(n));
      return;
    }
    if (n == "nobr") {
      reconstruct_formatting();
      if (in_scope("nobr")) {
        adoption_agency("nobr");
        reconstruct_formatting();
      }
      formatting_.push_back(insert(n));
      return;
    }
    if (is_formatting(n)) {
      reconstruct_formatting();
      formatting_.push_back(insert(n));
      return;
    }
    if (one_of(n, {"applet", "marquee", "object"})) {
      reconstruct_formatting();
      insert(n);
      formatting_.push_back(kMarker);
      return;
    }
    if (n == "table") {
      if (!quirks_) close_p_in_button_scope();
      insert(n);
      mode_ = Mode::InTable;
      return;
    }
    if (one_of(n, {"area", "br", "embed", "img", "keygen", "wbr", "input"})) {
      reconstruct_formatting();
      insert_void(n);
      return;
    }
    if (n == "image") {
      reconstruct_formatting();
      insert_void("img");
      return;
    }
    if (one_of(n, {"param", "source", "track"})) {
      insert_void(n);
      return;
    }
    if (n == "hr") {
      close_p_in_button_scope();
      insert_void(n);
      return;
    }
    if (n == "textarea") {
      insert_raw_text(t);
      return;
    }
    if (n == "xmp") {
      close_p_in_button_scope();
      reconstruct_formatting();
      insert_raw_text(t);
      return;
    }
    if (n == "iframe" || n == "noembed") {
      insert_raw_text(t);
      return;
    }
    if (n == "select") {
      reconstruct_formatting();
      insert(n);
      mode_ = Mode::InSelect;
      return;
    }
    if (n == "optgroup" || n == "option") {
      if (current_is("option")) stack_.pop_back();
      reconstruct_formatting();
      insert(n);
      return;
    }
    if (n == "rb" || n == "rtc") {
      if (in_scope("ruby")) generate_implied_end_tags();
      insert(n);
      return;
    }
    if (n == "rp" || n == "rt") {
      if (in_scope("ruby")) generate_implied_end_tags("rtc");
      insert(n);
      return;
    }
    if (n == "math" || n == "svg") {
      reconstruct_formatting();
      insert(n, n == "svg" ? Ns::Svg : Ns::MathMl);
      if (t.self_closing) stack_.pop_back();
      return;
    }
    if (one_of(n, {"caption", "col", "colgroup", "frame", "head", "tbody", "td", "tfoot", "th",
                   "thead", "tr"}))
      return;
    reconstruct_formatting();
    insert(n);
  }

  void in_body_end(const Token& t) {
    const std::string& n = t.name;
    if (n == "template") return end_template();
    if (n == "body" || n == "html") {
      if (!in_scope("body")) return;
      mode_ = Mode::AfterBody;
      if (n == "html") process(t);
      return;
    }
    if (one_of(n, {"address", "article", "aside", "blockquote", "button", "center", "details",
                   "dialog", "dir", "div", "dl", "fieldset", "figcaption", "figure", "footer",
                   "header", "hgroup", "listing", "main", "menu", "nav", "ol", "pre", "search",
                   "section", "summary", "ul"})) {
      if (!in_scope(n)) return;
      generate_implied_end_tags();
      pop_until(n);
      return;
    }
    if (n == "form") {
      if (template_open()) {
        if (!in_scope("form")) return;
        generate_implied_end_tags();
        pop_until("form");
        return;
      }
      const int f = form_;
      form_ = -1;
      if (f < 0 || !in_scope_node(f)) return;
      generate_implied_end_tags();
      stack_.erase(std::find(stack_.begin(), stack_.end(), f));
      return;
    }
    if (n == "p") {
      if (!in_scope("p", Scope::Button)) insert("p");
      close_p();
      return;
    }
    if (n == "li") {
      if (!in_scope("li", Scope::ListItem)) return;
      generate_implied_end_tags("li");
      pop_until("li");
      return;
    }
    if (n == "dd" || n == "dt") {
      if (!in_scope(n)) return;
      generate_implied_end_tags(n);
      pop_until(n);
      return;
    }
    if (one_of(n, {"h1", "h2", "h3", "h4", "h5", "h6"})) {
      if (!in_scope({"h1", "h2", "h3", "h4", "h5", "h6"})) return;
      generate_implied_end_tags();
      pop_until_any({"h1", "h2", "h3", "h4", "h5", "h6"});
      return;
    }
    if (is_formatting(n)) {
      if (!adoption_agency(n)) any_other_end_tag(n);
      return;
    }
    if (one_of(n, {"applet", "marquee", "object"})) {
      if (!in_scope(n)) return;
      generate_implied_end_tags();
      pop_until(n);
      clear_formatting_to_marker();
      return;
    }
    if (n == "br") {
      reconstruct_formatting();
      insert_void("br");
      return;
    }
    any_other_end_tag(n);
  }

  void any_other_end_tag(const std::string& n) {
    for (auto i = static_cast<std::ptrdiff_t>(stack_.size()) - 1; i >= 0; --i) {
      const int node = stack_[static_cast<std::size_t>(i)];
      if (name(node) == n && !is_foreign(node)) {
        generate_implied_end_tags(n);
        stack_.resize(static_cast<std::size_t>(i));
        return;
      }
      if (is_special_node(node)) return;
    }
  }

  // ---- tables -----------------------------------------------------------

  void in_table(const Token& t) {
    if (t.kind == Token::Kind::Text) {
      if (!foreign_current() && is_table_context(name(current()))) {
        if (!t.has_non_ws) return;
        foster_ = true;
        in_body(t);
        foster_ = false;
        return;
      }
      in_body(t);
      return;
    }
    if (t.kind == Token::Kind::StartTag) {
      const std::string& n = t.name;
      if (n == "caption") {
        clear_to({"table", "template", "html"});
        formatting_.push_back(kMarker);
        insert(n);
        mode_ = Mode::InCaption;
        return;
      }
      if (n == "colgroup") {
        clear_to({"table", "template", "html"});
        insert(n);
        mode_ = Mode::InColumnGroup;
        return;
      }
      if (n == "col") {
        clear_to({"table", "template", "html"});
        insert("colgroup");
        mode_ = Mode::InColumnGroup;
        process(t);
        return;
      }
      if (one_of(n, {"tbody", "tfoot", "thead"})) {
        clear_to({"table", "template", "html"});
        insert(n);
        mode_ = Mode::InTableBody;
        return;
      }
      if (one_of(n, {"td", "th", "tr"})) {
        clear_to({"table", "template", "html"});
        insert("tbody");
        mode_ = Mode::InTableBody;
        process(t);
        return;
      }
      if (n == "table") {
        if (!in_scope("table", Scope::Table)) return;
        pop_until("table");
        reset_insertion_mode();
        process(t);
        return;
      }
      if (one_of(n, {"style", "script", "template"})) {
        head_start_tag(t);
        return;
      }
      if (n == "input" && t.type_attr == "hidden") {
        insert_void(n);
        return;
      }
      if (n == "form") {
        if (form_ >= 0 || template_open()) return;
        insert(n);
        form_ = current();
        stack_.pop_back();
        return;
      }
    } else {
      const std::string& n = t.name;
      if (n == "table") {
        if (!in_scope("table", Scope::Table)) return;
        pop_until("table");
        reset_insertion_mode();
        return;
      }
      if (one_of(n, {"body", "caption", "col", "colgroup", "html", "tbody", "td", "tfoot", "th",
                     "thead", "tr"}))
        return;
      if (n == "template") return end_template();
    }
    foster_ = true;
    in_body(t);
    foster_ = false;
  }

  void in_caption(const Token& t) {
    const bool ends_caption =
        is_end(t, "caption") || is_end(t, "table") ||
        (t.kind == Token::Kind::StartTag &&
         one_of(t.name, {"caption", "col", "colgroup", "tbody", "td", "tfoot", "th", "thead", "tr"}));
    if (ends_caption) {
      if (!in_scope("caption", Scope::Table)) return;
      generate_implied_end_tags();
      pop_until("caption");
      clear_formatting_to_marker();
      mode_ = Mode::InTable;
      if (!is_end(t, "caption")) process(t);
      return;
    }
    if (t.kind == Token::Kind::EndTag &&
        one_of(t.name, {"body", "col", "colgroup", "html", "tbody", "td", "tfoot", "th", "thead",
                        "tr"}))
      return;
    in_body(t);
  }

  void in_column_group(const Token& t) {
    if (is_ws_text(t)) return;
    if (is_start(t, "col")) {
      insert_void("col");
      return;
    }
    if (is_end(t, "col")) return;
    if (is_start(t, "template") || is_end(t, "template")) {
      in_head(t);
      return;
    }
    if (!current_is("colgroup")) return;
    stack_.pop_back();
    mode_ = Mode::InTable;
    if (!is_end(t, "colgroup")) process(t);
  }

  void in_table_body(const Token& t) {
    if (is_start(t, "tr")) {
      clear_to({"tbody", "tfoot", "thead", "template", "html"});
      insert("tr");
      mode_ = Mode::InRow;
      return;
    }
    if (is_start(t, "th") || is_start(t, "td")) {
      clear_to({"tbody", "tfoot", "thead", "template", "html"});
      insert("tr");
      mode_ = Mode::InRow;
      process(t);
      return;
    }
    if (t.kind == Token::Kind::EndTag && one_of(t.name, {"tbody", "tfoot", "thead"})) {
      if (!in_scope(t.name, Scope::Table)) return;
      clear_to({"tbody", "tfoot", "thead", "template", "html"});
      stack_.pop_back();
      mode_ = Mode::InTable;
      return;
    }
    if ((t.kind == Token::Kind::StartTag &&
         one_of(t.name, {"caption", "col", "colgroup", "tbody", "tfoot", "thead"})) ||
        is_end(t, "table")) {
      if (!in_scope({"tbody", "thead", "tfoot"}, Scope::Table)) return;
      clear_to({"tbody", "tfoot", "thead", "template", "html"});
      stack_.pop_back();
      mode_ = Mode::InTable;
      process(t);
      return;
    }
    if (t.kind == Token::Kind::EndTag &&
        one_of(t.name, {"body", "caption", "col", "colgroup", "html", "td", "th", "tr"}))
      return;
    in_table(t);
  }

  bool end_row() {
    if (!in_scope("tr", Scope::Table)) return false;
    clear_to({"tr", "template", "html"});
    stack_.pop_back();
    mode_ = Mode::InTableBody;
    return true;
  }

  void in_row(const Token& t) {
    if (is_start(t, "th") || is_start(t, "td")) {
      clear_to({"tr", "template", "html"});
      insert(t.name);
      mode_ = Mode::InCell;
      formatting_.push_back(kMarker);
      return;
    }
    if (is_end(t, "tr")) {
      end_row();
      return;
    }
    if ((t.kind == Token::Kind::StartTag &&
         one_of(t.name, {"caption", "col", "colgroup", "tbody", "tfoot", "thead", "tr"})) ||
        is_end(t, "table")) {
      if (end_row()) process(t);
      return;
    }
    if (t.kind == Token::Kind::EndTag && one_of(t.name, {"tbody", "tfoot", "thead"})) {
      if (!in_scope(t.name, Scope::Table)) return;
      if (end_row()) process(t);
      return;
    }
    if (t.kind == Token::Kind::EndTag &&
        one_of(t.name, {"body", "caption", "col", "colgroup", "html", "td", "th"}))
      return;
    in_table(t);
  }

  void close_cell() {
    generate_implied_end_tags();
    pop_until_any({"td", "th"});
    clear_formatting_to_marker();
    mode_ = Mode::InRow;
  }

  void in_cell(const Token& t) {
    if (t.kind == Token::Kind::EndTag && (t.name == "td" || t.name == "th")) {
      if (!in_scope(t.name, Scope::Table)) return;
      close_cell();
      return;
    }
    if (t.kind == Token::Kind::StartTag &&
        one_of(t.name, {"caption", "col", "colgroup", "tbody", "td", "tfoot", "th", "thead", "tr"})) {
      if (!in_scope({"td", "th"}, Scope::Table)) return;
      close_cell();
      process(t);
      return;
    }
    if (t.kind == Token::Kind::EndTag &&
        one_of(t.name, {"body", "caption", "col", "colgroup", "html"}))
      return;
    if (t.kind == Token::Kind::EndTag &&
        one_of(t.name, {"table", "tbody", "tfoot", "thead", "tr"})) {
      if (!in_scope(t.name, Scope::Table)) return;
      close_cell();
      process(t);
      return;
    }
    in_body(t);
  }

  void end_select() {
    if (!in_scope("select", Scope::Select)) return;
    pop_until("select");
    reset_insertion_mode();
  }

  void in_select(const Token& t) {
    if (t.kind == Token::Kind::Text) return;
    if (t.kind == Token::Kind::StartTag) {
      const std::string& n = t.name;
      if (n == "option") {
        if (current_is("option")) stack_.pop_back();
        insert(n);
        return;
      }
      if (n == "optgroup") {
        if (current_is("option")) stack_.pop_back();
        if (current_is("optgroup")) stack_.pop_back();
        insert(n);
        return;
      }
      if (n == "hr") {
        if (current_is("option")) stack_.pop_back();
        if (current_is("optgroup")) stack_.pop_back();
        insert_void(n);
        return;
      }
      if (n == "select") {
        end_select();
        return;
      }
      if (one_of(n, {"input", "keygen", "textarea"})) {
        if (!in_scope("select", Scope::Select)) return;
        end_select();
        process(t);
        return;
      }
      if (one_of(n, {"caption", "table", "tbody", "tfoot", "thead", "tr", "td", "th"}) &&
          in_scope("table", Scope::Table)) {
        end_select();
        process(t);
        return;
      }
      if (n == "script" || n == "template") head_start_tag(t);
      return;
    }
    const std::string& n = t.name;
    if (n == "optgroup") {
      if (current_is("option") && stack_.size() >= 2 &&
          name(stack_[stack_.size() - 2]) == "optgroup")
        stack_.pop_back();
      if (current_is("optgroup")) stack_.pop_back();
      return;
    }
    if (n == "option") {
      if (current_is("option")) stack_.pop_back();
      return;
    }
    if (n == "select") {
      end_select();
      return;
    }
    if (one_of(n, {"caption", "table", "tbody", "tfoot", "thead", "tr", "td", "th"})) {
      if (!in_scope(n, Scope::Table)) return;
      end_select();
      process(t);
      return;
    }
    if (n == "template") end_template();
  }

  void after_body(const Token& t) {
    if (t.kind == Token::Kind::Text && !t.has_non_ws) {
      in_body(t);
      return;
    }
    if (is_start(t, "html")) return;
    if (is_end(t, "html")) return;
    mode_ = Mode::InBody;
    process(t);
  }

  void in_frameset(const Token& t) {
    if (is_start(t, "frameset")) {
      insert("frameset");
      return;
    }
    if (is_end(t, "frameset")) {
      if (current() == html_) return;
      stack_.pop_back();
      if (!current_is("frameset")) mode_ = Mode::AfterFrameset;
      return;
    }
    if (is_start(t, "frame")) {
      insert_void("frame");
      return;
    }
    if (is_start(t, "noframes")) insert_raw_text(t);
  }

  Tokenizer& tok_;
  std::vector<Node> nodes_;
  std::vector<int> stack_;
  std::vector<int> formatting_;
  Mode mode_ = Mode::BeforeHtml;
  Mode original_ = Mode::InBody;
  int html_ = -1;
  int head_ = -1;
  int form_ = -1;
  bool foster_ = false;
  bool head_reopened_ = false;
  bool quirks_ = true;
  bool seen_content_ = false;
};

}  // namespace html_detail

// Parses an HTML document into its element tree. Tag names are lowercased;
// text, comments, doctype and attributes are dropped. Empty or
// whitespace-only input raises EmptyDocument; any other input is recovered
// into a tree rooted at `html` with `head` and `body` (or `frameset`).
inline DomTree parse_html(std::string_view document, std::string source_id,
                          const ParseOptions& options = {}) {
  if (std::all_of(document.begin(), document.end(), html_detail::is_ws))
    throw EmptyDocument(source_id);
  html_detail::Tokenizer tokenizer(document);
  html_detail::TreeBuilder builder(tokenizer);
  builder.run();
  DomTree tree = builder.to_tree(std::move(source_id));
  if (const std::size_t h = tree.height(); h > options.max_depth)
    throw DepthLimitExceeded(tree.source_id(), h, options.max_depth);
  return tree;
}

}  // namespace tkndd

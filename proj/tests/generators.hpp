#pragma once

#include <random>
#include <string>
#include <vector>

namespace gen {

// Random HTML page text. Pages are mostly well nested but include scripts in
// head and body, stray end tags, unclosed elements and text, so the parser's
// recovery paths are exercised as well.
inline std::string random_page(std::mt19937_64& rng, std::size_t elements) {
  static const std::vector<std::string> kTags{"div", "p",  "span", "a",     "ul",   "li",  "table",
                                              "tr",  "td", "b",    "i",     "form", "input", "img",
                                              "h1",  "h2", "section", "nav", "script", "em", "br"};
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
  std::uniform_int_distribution<std::size_t> pick(0, kTags.size() - 1);

  std::string out;
  if (coin(0.5)) out += "<!DOCTYPE html>";
  if (coin(0.8)) out += "<html>";
  if (coin(0.7)) {
    out += "<head><title>t</title>";
    if (coin(0.5)) out += "<script>var x = '<div>';</script>";
    out += "</head>";
  }
  if (coin(0.8)) out += "<body>";
  std::vector<std::string> open;
  for (std::size_t i = 0; i < elements; ++i) {
    const std::string& tag = kTags[pick(rng)];
    if (tag == "script") {
      out += "<script>if (a < b) { document.write('<p>'); }</script>";
      continue;
    }
    if (tag == "br" || tag == "img" || tag == "input") {
      out += "<" + tag + ">";
      continue;
    }
    out += "<" + tag + ">";
    if (coin(0.3)) out += "text";
    open.push_back(tag);
    while (!open.empty() && coin(0.4)) {
      if (!coin(0.05)) out += "</" + open.back() + ">";
      open.pop_back();
    }
    if (coin(0.02)) out += "</" + kTags[pick(rng)] + ">";
  }
  if (coin(0.5))
    while (!open.empty()) {
      out += "</" + open.back() + ">";
      open.pop_back();
    }
  return out;
}

}  // namespace gen

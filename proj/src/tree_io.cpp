#include "magdiv/errors.hpp"
#include "magdiv/format.hpp"
#include "magdiv/tree.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace magdiv {

WeightedTree read_tree(std::istream &in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::vector<LabeledEdge> edges;
  std::vector<std::string> isolated;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (line != kTreeFileHeader) {
        throw ParseError(lineno, std::string("expected header '") + kTreeFileHeader + "'");
      }
      have_header = true;
      continue;
    }
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string s; fields >> s;) tok.push_back(s);
    if (tok.empty() || tok.front().front() == '#') continue;
    if (tok.size() == 1) {
      isolated.push_back(tok[0]);
    } else if (tok.size() == 3) {
      auto len = parse_real(tok[2]);
      if (!len) throw ParseError(lineno, "edge length is not a real number: '" + tok[2] + "'");
      edges.push_back({tok[0], tok[1], *len});
    } else {
      throw ParseError(lineno, "expected '<u> <v> <length>' or a single vertex label, got " +
                                   std::to_string(tok.size()) + " fields");
    }
  }
  if (!have_header) throw ParseError(lineno, "empty tree file");
  if (edges.empty() && isolated.empty()) throw ParseError(lineno, "tree file lists no vertices");
  return WeightedTree::from_labeled(edges, isolated);
}

WeightedTree read_tree_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_tree(in);
}

void write_tree(std::ostream &out, const WeightedTree &t) {
  out << kTreeFileHeader << '\n';
  if (t.edge_count() == 0) {
    out << t.vertices().front() << '\n';
    return;
  }
  for (const auto &e : t.edges()) {
    out << t.vertices()[e.u] << ' ' << t.vertices()[e.v] << ' ' << format_real(e.length) << '\n';
  }
}

std::string tree_to_string(const WeightedTree &t) {
  std::ostringstream s;
  write_tree(s, t);
  return s.str();
}

}  // namespace magdiv

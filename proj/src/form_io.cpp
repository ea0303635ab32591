#include "qvf/form_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qvf::forms {

std::string serialize_form(const Form& f) {
  std::ostringstream os;
  os << f.field().header() << " n=" << f.vars() << " d=" << f.degree() << "\n";
  for (const Term& t : f.terms()) {
    for (int i = 0; i < f.vars(); ++i) {
      if (i) os << " ";
      os << int(t.exps[i]);
    }
    os << " : " << t.coeff << "\n";
  }
  return os.str();
}

LoadedForm parse_form(const std::string& text) {
  std::istringstream is(text);
  std::string header;
  if (!std::getline(is, header)) throw std::invalid_argument("empty form file");

  // split the trailing n= and d= keys off the field header
  std::istringstream hs(header);
  std::string tok, field_part;
  int n = -1, d = -1;
  while (hs >> tok) {
    if (tok.rfind("n=", 0) == 0)
      n = std::stoi(tok.substr(2));
    else if (tok.rfind("d=", 0) == 0)
      d = std::stoi(tok.substr(2));
    else
      field_part += (field_part.empty() ? "" : " ") + tok;
  }
  if (n < 1 || d < 0) throw std::invalid_argument("form header missing n/d");

  auto field = std::make_unique<FieldSpec>(FieldSpec::from_header(field_part));

  std::vector<Term> terms;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Term t;
    for (int i = 0; i < n; ++i) {
      int e;
      if (!(ls >> e) || e < 0) throw std::invalid_argument("bad exponent line: " + line);
      t.exps[i] = std::uint8_t(e);
    }
    std::string colon;
    unsigned long c;
    if (!(ls >> colon >> c) || colon != ":")
      throw std::invalid_argument("bad monomial line: " + line);
    if (c == 0 || c >= field->q())
      throw std::invalid_argument("coefficient out of range: " + line);
    t.coeff = Elem(c);
    int sum = 0;
    for (int i = 0; i < n; ++i) sum += t.exps[i];
    if (sum != d) throw std::invalid_argument("non-homogeneous monomial: " + line);
    terms.push_back(t);
  }

  Form form = Form::from_terms(*field, n, d, std::move(terms));
  return LoadedForm{std::move(field), std::move(form)};
}

LoadedForm load_form_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open form file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_form(os.str());
}

}  // namespace qvf::forms

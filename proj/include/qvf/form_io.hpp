#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "qvf/forms.hpp"

namespace qvf::forms {

// Text format: header line `q=.. p=.. k=.. modulus=.. n=.. d=..`, then one
// monomial per line `e1 e2 ... en : c`, sorted descending-lexicographic.
std::string serialize_form(const Form& f);

struct LoadedForm {
  std::unique_ptr<FieldSpec> field;
  Form form;
};

// Rejects non-homogeneous input, zero coefficients and malformed headers.
LoadedForm parse_form(const std::string& text);
LoadedForm load_form_file(const std::string& path);

}  // namespace qvf::forms

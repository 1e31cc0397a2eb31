#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "app.hpp"

namespace eqrh::cli {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) fail(ErrorKind::InvalidArgument, "cannot allocate a digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, data.data(), data.size()) == 1 && EVP_DigestFinal_ex(ctx, md, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) fail(ErrorKind::InvalidArgument, "sha256 failed");
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(md[i]);
  return os.str();
}

namespace {

bool is_complex_pair(const Json& j) {
  return j.is_array() && j.size() == 2 && j[0].is_number_float() && j[1].is_number_float();
}

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

std::string complex_text(const Json& j) {
  const double re = j[0].get<double>(), im = j[1].get<double>();
  if (im == 0.0) return number(re);
  std::ostringstream os;
  os << number(re) << (im < 0.0 || std::signbit(im) ? " - " : " + ") << number(std::abs(im)) << "i";
  return os.str();
}

bool is_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const Json& row : j) {
    if (!row.is_array() || row.empty()) return false;
    for (const Json& x : row)
      if (!is_complex_pair(x)) return false;
  }
  return true;
}

std::string scalar_text(const Json& j) {
  if (is_complex_pair(j)) return complex_text(j);
  if (j.is_number_float()) return number(j.get<double>());
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "-";
  return j.dump();
}

void emit(std::ostream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const Json& v = it.value();
      const bool inline_value = !(v.is_object() && !v.empty()) && !is_matrix(v) &&
                                !(v.is_array() && !v.empty() && !is_complex_pair(v) &&
                                  std::any_of(v.begin(), v.end(), [](const Json& x) { return x.is_structured(); }));
      if (inline_value && v.is_array() && !is_complex_pair(v)) {
        os << pad << it.key() << ": [";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar_text(v[i]);
        os << "]\n";
      } else if (inline_value) {
        os << pad << it.key() << ": " << scalar_text(v) << "\n";
      } else {
        os << pad << it.key() << ":\n";
        emit(os, v, indent + 2);
      }
    }
  } else if (is_matrix(j)) {
    for (const Json& row : j) {
      os << pad;
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "  " : "") << std::setw(24) << complex_text(row[c]);
      os << "\n";
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      const bool flat = j[i].is_array() && std::none_of(j[i].begin(), j[i].end(), [](const Json& x) {
                          return x.is_structured() && !is_complex_pair(x);
                        });
      if (flat && !is_complex_pair(j[i])) {
        os << pad << "- [";
        for (std::size_t k = 0; k < j[i].size(); ++k) os << (k ? ", " : "") << scalar_text(j[i][k]);
        os << "]\n";
      } else if (j[i].is_structured() && !is_complex_pair(j[i])) {
        os << pad << "- [" << i << "]\n";
        emit(os, j[i], indent + 2);
      } else {
        os << pad << "- " << scalar_text(j[i]) << "\n";
      }
    }
  } else {
    os << pad << scalar_text(j) << "\n";
  }
}

}  // namespace

std::string render_text(const Json& report) {
  std::ostringstream os;
  emit(os, report, 0);
  return os.str();
}

}  // namespace eqrh::cli

#include <doctest.h>

#include <string>

#include "qdquapi/config.hpp"
#include "qdquapi/errors.hpp"

using namespace qdquapi;

namespace {

const char* kGeometryDoc = R"(
[system]
mu = 79.3
eps_r = 10
l = 10
d = 3.3
field = 1.9
[bath]
alpha = 0.027
omega_c = 2.2
temperature = 77
[grid]
dt = 0.25
kmax = 5
[initial]
state = e3
)";

const char* kExplicitDoc = R"(
[system]
j12 = 0.596
k1 = 0.3
k2 = 0.2
delta1 = 0.1
[bath]
alpha = 0.027
omega_c = 2.2
temperature = 150
[grid]
dt = 0.5
kmax = 3
n_steps = 100
[initial]
state = werner
lambda = 0.625
[output]
path = out.csv
stride = 2
)";

std::string replace(std::string doc, const std::string& from, const std::string& to) {
  const auto pos = doc.find(from);
  REQUIRE(pos != std::string::npos);
  doc.replace(pos, from.size(), to);
  return doc;
}

std::string error_key(const std::string& doc) {
  try {
    load_config(doc);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

std::string error_text(const std::string& doc) {
  try {
    load_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("geometry form derives the exchange and drive") {
  const RunConfig c = load_config(kGeometryDoc);
  CHECK(c.system.j12 == doctest::Approx(0.596).epsilon(0.005));
  CHECK(c.system.k1 == doctest::Approx(0.4766).epsilon(1e-3));
  CHECK(c.system.k2 == c.system.k1);
  REQUIRE(c.geometry.has_value());
  CHECK(c.geometry->l == 10.0);
  CHECK(c.grid.n_steps == 4000);  // 1 ns by default
  CHECK(c.initial.kind == StandardState::kE3);
  bool mentions_exchange = false;
  for (const auto& line : c.derived_summary())
    mentions_exchange |= line.find("j12") != std::string::npos && line.find("0.59") != std::string::npos;
  CHECK(mentions_exchange);
}

TEST_CASE("explicit form is taken verbatim") {
  const RunConfig c = load_config(kExplicitDoc);
  CHECK(c.system == SystemParams{0.1, 0.0, 0.3, 0.2, 0.596});
  CHECK(c.bath == BathSpec{0.027, 2.2, 150.0});
  CHECK(c.grid == SimGrid{0.5, 100, 3});
  CHECK(c.initial.kind == StandardState::kWerner);
  CHECK(c.initial.lambda == 0.625);
  CHECK(c.output_path == "out.csv");
  CHECK(c.stride == 2);
}

TEST_CASE("material constants derive the bath") {
  const std::string doc = replace(kGeometryDoc, "alpha = 0.027\nomega_c = 2.2\n",
                                  "u = 5.11e5\nmass_density = 5.37\nd_e = -14.6\nd_h = -4.8\n");
  const RunConfig c = load_config(doc);
  CHECK(c.bath.alpha == doctest::Approx(0.0316).epsilon(0.01));
  CHECK(c.bath.omega_c == doctest::Approx(2.19).epsilon(0.01));
  REQUIRE(c.material.has_value());
  CHECK(c.material->d == 3.3);
}

TEST_CASE("echoed config reloads into the same run") {
  for (const char* doc : {kGeometryDoc, kExplicitDoc}) {
    const RunConfig c = load_config(doc);
    const RunConfig back = load_config(to_text(c));
    CHECK(back.same_run(c));
    CHECK(back.system == c.system);
    CHECK(back.bath == c.bath);
  }
  std::string explicit_state = replace(kExplicitDoc, "state = werner\nlambda = 0.625\n",
                                       "state = explicit\nmatrix = 0.5 0 0 0 0 0 0.5 0  0 0 0 0 0 0 0 0"
                                       "  0 0 0 0 0 0 0 0  0.5 0 0 0 0 0 0.5 0\n");
  const RunConfig c = load_config(explicit_state);
  REQUIRE(c.initial.explicit_rho.has_value());
  CHECK(c.initial.matrix()(0, 3) == std::complex<double>(0.5, 0.0));
  CHECK(load_config(to_text(c)).same_run(c));
}

TEST_CASE("missing sections are reported together") {
  const std::string text = error_text("");
  CHECK(text.find("[system]") != std::string::npos);
  CHECK(text.find("[bath]") != std::string::npos);
  CHECK(text.find("[grid]") != std::string::npos);
  CHECK(text.find("[initial]") != std::string::npos);
}

TEST_CASE("invalid configs name the offending key") {
  CHECK(error_key(replace(kExplicitDoc, "kmax = 3", "kmax = 9")) == "kmax");
  CHECK(error_key(replace(kExplicitDoc, "kmax = 3", "kmax = 0")) == "kmax");
  CHECK(error_key(replace(kExplicitDoc, "dt = 0.5", "dt = -1")) == "dt");
  CHECK(error_key(replace(kExplicitDoc, "dt = 0.5", "dt = fast")) == "dt");
  CHECK(error_key(replace(kExplicitDoc, "temperature = 150", "temperature = 0")) == "bath");
  CHECK(error_key(replace(kExplicitDoc, "temperature = 150\n", "")) == "temperature");
  CHECK(error_key(replace(kExplicitDoc, "j12 = 0.596", "j12 = 0.596\ncolour = blue")) == "colour");
  CHECK(error_key(replace(kExplicitDoc, "[output]", "[extras]\nx = 1\n[output]")) == "extras");
  CHECK(error_key(replace(kExplicitDoc, "lambda = 0.625", "lambda = 1.5")) == "lambda");
  CHECK(error_key(replace(kExplicitDoc, "state = werner", "state = bell")) == "state");
  CHECK(error_key(replace(kExplicitDoc, "stride = 2", "stride = 0")) == "stride");
  CHECK(error_key(replace(kGeometryDoc, "l = 10", "l = 0")) == "system");
  CHECK(error_key(replace(kGeometryDoc, "field = 1.9", "field = 1.9\nk1 = 0.2")) == "k1");
}

TEST_CASE("explicit initial matrices must be physical") {
  const std::string base = replace(kExplicitDoc, "state = werner\nlambda = 0.625\n",
                                   "state = explicit\nmatrix = MATRIX\n");
  CHECK(error_key(replace(base, "MATRIX", "1 0 0 0")) == "matrix");
  // trace 2
  CHECK(error_key(replace(base, "MATRIX",
                          "1 0 0 0 0 0 0 0  0 0 1 0 0 0 0 0  0 0 0 0 0 0 0 0  0 0 0 0 0 0 0 0")) ==
        "matrix");
  // negative eigenvalue
  CHECK(error_key(replace(base, "MATRIX",
                          "1.5 0 0 0 0 0 0 0  0 0 -0.5 0 0 0 0 0  0 0 0 0 0 0 0 0  0 0 0 0 0 0 0 0")) ==
        "matrix");
  CHECK_THROWS_AS(validate_state(DensityMatrix::Identity()), InvalidStateError);
  CHECK_NOTHROW(validate_state(DensityMatrix::Identity() / 4.0));
}

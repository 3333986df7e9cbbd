#include "subrqa/json_io.hpp"

#include <sstream>

#include "subrqa/errors.hpp"

namespace subrqa {

namespace {

Json integer_to_json(const Integer& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) return Integer(j.get<std::string>());
  throw ParseError("expected an integer", 0);
}

Json optional_rational(const std::optional<Rational>& r) { return r ? rational_to_json(*r) : Json(nullptr); }

}  // namespace

Json rational_to_json(const Rational& r) {
  Json j;
  j["num"] = integer_to_json(r.get_num());
  j["den"] = integer_to_json(r.get_den());
  j["approx"] = to_double(r);
  return j;
}

Rational rational_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den")) throw ParseError("expected {num, den}", 0);
  const Integer den = integer_from_json(j.at("den"));
  if (den == 0) throw ParseError("zero denominator", 0);
  Rational r(integer_from_json(j.at("num")), den);
  r.canonicalize();
  return r;
}

Json to_json(const RationalOrInfinity& r) { return r.infinite ? Json("inf") : rational_to_json(r.value); }

RationalOrInfinity rational_or_infinity_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return RationalOrInfinity::infinity();
  return RationalOrInfinity::finite(rational_from_json(j));
}

Json to_json(const RecogConstants& rc) {
  Json j;
  j["q"] = rc.q;
  j["alpha"] = rc.alpha;
  j["beta"] = rc.beta;
  j["c"] = rational_to_json(rc.c);
  j["K"] = rc.K;
  j["R"] = rc.R;
  j["R0"] = rc.R0;
  return j;
}

Json to_json(const RQAReport& r) {
  Json j;
  j["provenance"] = to_string(r.provenance);
  j["n"] = r.n ? Json(*r.n) : Json("inf");
  j["m"] = r.m;
  j["h"] = r.h;
  j["l_min"] = r.l_min;
  Json ld = Json::object();
  for (const auto& [len, p] : r.linedens) ld[std::to_string(len)] = rational_to_json(p);
  j["linedens"] = ld;
  j["lineDens"] = rational_to_json(r.lineDens);
  j["RR"] = rational_to_json(r.RR);
  j["RR_1"] = rational_to_json(r.RR_1);
  j["DET"] = optional_rational(r.DET);
  j["Lavg"] = r.Lavg ? to_json(*r.Lavg) : Json(nullptr);
  j["ENT"] = r.ENT ? Json(*r.ENT) : Json(nullptr);
  j["C"] = optional_rational(r.C);
  j["notes"] = r.notes;
  return j;
}

Json to_json(const DensityTable& t) {
  Json j;
  j["substitution"] = t.subst.to_string();
  j["constants"] = to_json(t.constants);
  j["method"] = to_string(t.method);
  j["n1"] = t.n1;
  j["n2"] = t.n2;
  Json base = Json::object();
  for (const auto& [l, d] : t.base) base[std::to_string(l)] = rational_to_json(d);
  j["base"] = base;
  Json ev = Json::array();
  for (const auto& e : t.evidence) {
    Json row;
    row["ell0"] = e.ell0;
    row["scales"] = e.scales;
    Json emp = Json::array();
    for (const auto& v : e.empirical) emp.push_back(rational_to_json(v));
    row["empirical"] = emp;
    row["tolerances"] = e.tolerances;
    row["child"] = e.child ? Json(*e.child) : Json(nullptr);
    row["child_empirical"] = optional_rational(e.child_empirical);
    ev.push_back(row);
  }
  j["evidence"] = ev;
  return j;
}

DensityTable density_table_from_json(const Json& j) {
  try {
    const Substitution s = Substitution::parse(j.at("substitution").get<std::string>());
    const Json& c = j.at("constants");
    RecogConstants rc;
    rc.q = c.at("q").get<std::size_t>();
    rc.alpha = c.at("alpha").get<std::size_t>();
    rc.beta = c.at("beta").get<std::size_t>();
    rc.c = rational_from_json(c.at("c"));
    rc.K = c.at("K").get<std::size_t>();
    rc.R = c.at("R").get<std::size_t>();
    rc.R0 = c.at("R0").get<std::size_t>();
    DensityTable t{s, rc, density_method_from_string(j.at("method").get<std::string>()),
                   j.at("n1").get<std::size_t>(), j.at("n2").get<std::size_t>(), {}, {}};
    for (const auto& [key, value] : j.at("base").items()) t.base[std::stoul(key)] = rational_from_json(value);
    for (std::size_t l = 1; l < rc.R; ++l) {
      if (!t.base.count(l)) throw ParseError("density table lacks base length " + std::to_string(l), 0);
    }
    if (j.contains("evidence")) {
      for (const auto& row : j.at("evidence")) {
        DensityEvidence e;
        e.ell0 = row.at("ell0").get<std::size_t>();
        e.scales = row.at("scales").get<std::vector<std::size_t>>();
        for (const auto& v : row.at("empirical")) e.empirical.push_back(rational_from_json(v));
        e.tolerances = row.at("tolerances").get<std::vector<double>>();
        if (!row.at("child").is_null()) e.child = row.at("child").get<std::size_t>();
        if (!row.at("child_empirical").is_null()) e.child_empirical = rational_from_json(row.at("child_empirical"));
        t.evidence.push_back(std::move(e));
      }
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed density table: ") + e.what(), 0);
  }
}

std::string reports_to_csv(const std::vector<RQAReport>& reports) {
  std::ostringstream out;
  out << "provenance,n,m,h,l_min,RR,DET,Lavg,ENT,C,lineDens,RR_approx,DET_approx,Lavg_approx,C_approx\n";
  auto opt = [](const std::optional<Rational>& r) { return r ? to_string(*r) : std::string(); };
  auto opt_d = [](const std::optional<Rational>& r) {
    std::ostringstream s;
    if (r) s.precision(17), s << to_double(*r);
    return s.str();
  };
  for (const auto& r : reports) {
    std::ostringstream ent, lavg_d;
    ent.precision(17);
    lavg_d.precision(17);
    if (r.ENT) ent << *r.ENT;
    std::string lavg;
    if (r.Lavg) {
      lavg = to_string(*r.Lavg);
      if (r.Lavg->infinite) lavg_d << "inf";
      else lavg_d << to_double(r.Lavg->value);
    }
    std::ostringstream rr_d;
    rr_d.precision(17);
    rr_d << to_double(r.RR);
    out << to_string(r.provenance) << ',' << (r.n ? std::to_string(*r.n) : "inf") << ',' << r.m << ',' << r.h << ','
        << r.l_min << ',' << to_string(r.RR) << ',' << opt(r.DET) << ',' << lavg << ',' << ent.str() << ','
        << opt(r.C) << ',' << to_string(r.lineDens) << ',' << rr_d.str() << ',' << opt_d(r.DET) << ','
        << lavg_d.str() << ',' << opt_d(r.C) << "\n";
  }
  return out.str();
}

}  // namespace subrqa

#include "tangentia/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tangentia/errors.hpp"

namespace tangentia::io {

namespace {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidArgument(where + ": missing field \"" + key + "\"");
  }
  return j.at(key);
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InvalidArgument(where + ": expected a number");
  return j.get<double>();
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InvalidArgument(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

CVector complex_vector(const Json& re, const Json& im, std::size_t n, const std::string& where) {
  const auto r = numbers(re, where + "_re");
  const auto i = numbers(im, where + "_im");
  if (r.size() != n || i.size() != n) {
    throw InvalidArgument(where + ": expected " + std::to_string(n) + " coordinates");
  }
  CVector out(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) out(static_cast<Eigen::Index>(k)) = Complex(r[k], i[k]);
  return out;
}

Json real_parts(const CVector& x) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(x(i).real());
  return out;
}

Json imag_parts(const CVector& x) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(x(i).imag());
  return out;
}

Json pairs(const CVector& x) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(Json::array({x(i).real(), x(i).imag()}));
  return out;
}

Json statuses_to_json(const StatusCounts& s) {
  return Json{{"converged", s.converged},
              {"singular", s.singular},
              {"truncated", s.truncated},
              {"diverged", s.diverged}};
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
  if (!out) throw InvalidArgument("failed writing " + path);
}

SphereArrangement arrangement_from_json(const Json& j) {
  const Json& nj = field(j, "n", "arrangement");
  if (!nj.is_number_integer()) throw InvalidArgument("arrangement: \"n\" must be an integer");
  const int n = nj.get<int>();
  const Json& list = field(j, "spheres", "arrangement");
  if (!list.is_array()) throw InvalidArgument("arrangement: \"spheres\" must be an array");
  std::vector<Sphere> spheres;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "sphere " + std::to_string(i);
    const auto c = numbers(field(list[i], "center", where), where + " center");
    const double r = number(field(list[i], "radius", where), where + " radius");
    spheres.emplace_back(Eigen::Map<const RVector>(c.data(), static_cast<Eigen::Index>(c.size())), r);
  }
  return SphereArrangement(n, std::move(spheres));
}

Json arrangement_to_json(const SphereArrangement& arr) {
  Json spheres = Json::array();
  for (const auto& s : arr.spheres()) {
    Json c = Json::array();
    for (Eigen::Index i = 0; i < s.center.size(); ++i) c.push_back(s.center(i));
    spheres.push_back(Json{{"center", c}, {"radius", s.radius}});
  }
  return Json{{"n", arr.dimension()}, {"spheres", spheres}};
}

Json solutions_to_json(const SolutionSet& s, int n) {
  Json records = Json::array();
  for (const auto& r : s.records) {
    records.push_back(Json{{"p_re", real_parts(r.line.p)},
                           {"p_im", imag_parts(r.line.p)},
                           {"v_re", real_parts(r.line.v)},
                           {"v_im", imag_parts(r.line.v)},
                           {"real", r.is_real},
                           {"residual", r.residual},
                           {"multiplicity", r.multiplicity},
                           {"v_isotropic", r.v_isotropic}});
  }
  return Json{{"n", n},
              {"seed", s.config.seed},
              {"raw_path_count", s.raw_path_count},
              {"total", s.total()},
              {"real", s.real_count()},
              {"statuses", statuses_to_json(s.statuses)},
              {"patch", pairs(s.patch)},
              {"records", records}};
}

SolutionSet solutions_from_json(const Json& j) {
  SolutionSet out;
  const Json& list = field(j, "records", "solutions");
  if (!list.is_array()) throw InvalidArgument("solutions: \"records\" must be an array");
  if (j.contains("patch")) {
    const Json& patch = j.at("patch");
    if (!patch.is_array()) throw InvalidArgument("solutions: \"patch\" must be an array");
    out.patch.resize(static_cast<Eigen::Index>(patch.size()));
    for (std::size_t i = 0; i < patch.size(); ++i) {
      const auto pr = numbers(patch[i], "patch entry");
      if (pr.size() != 2) throw InvalidArgument("solutions: patch entries are [re, im] pairs");
      out.patch(static_cast<Eigen::Index>(i)) = Complex(pr[0], pr[1]);
    }
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "record " + std::to_string(i);
    const Json& rj = list[i];
    const std::size_t n = numbers(field(rj, "v_re", where), where + " v_re").size();
    SolutionRecord rec;
    rec.line.p = complex_vector(field(rj, "p_re", where), field(rj, "p_im", where), n, where + " p");
    rec.line.v = complex_vector(field(rj, "v_re", where), field(rj, "v_im", where), n, where + " v");
    const Json& real = field(rj, "real", where);
    if (!real.is_boolean()) throw InvalidArgument(where + ": \"real\" must be a boolean");
    rec.is_real = real.get<bool>();
    rec.residual = number(field(rj, "residual", where), where + " residual");
    const Json& m = field(rj, "multiplicity", where);
    if (!m.is_number_integer() || m.get<int>() < 1) {
      throw InvalidArgument(where + ": \"multiplicity\" must be a positive integer");
    }
    rec.multiplicity = m.get<int>();
    if (rj.contains("v_isotropic") && rj.at("v_isotropic").is_boolean()) {
      rec.v_isotropic = rj.at("v_isotropic").get<bool>();
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

std::vector<ProjectiveQuadric> quadrics_from_json(const Json& j) {
  const Json& nj = field(j, "n", "quadrics");
  if (!nj.is_number_integer()) throw InvalidArgument("quadrics: \"n\" must be an integer");
  const int n = nj.get<int>();
  if (n < 1) throw InvalidArgument("quadrics: \"n\" must be positive");
  const Json& list = field(j, "quadrics", "quadrics");
  if (!list.is_array()) throw InvalidArgument("quadrics: \"quadrics\" must be an array");
  std::vector<ProjectiveQuadric> out;
  const auto size = static_cast<std::size_t>(n + 1);
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string where = "quadric " + std::to_string(k);
    const Json& rows = list[k];
    if (!rows.is_array() || rows.size() != size) {
      throw InvalidArgument(where + ": expected " + std::to_string(size) + " rows");
    }
    CMatrix q(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
    for (std::size_t r = 0; r < size; ++r) {
      if (!rows[r].is_array() || rows[r].size() != size) {
        throw InvalidArgument(where + ": expected " + std::to_string(size) + " columns");
      }
      for (std::size_t c = 0; c < size; ++c) {
        const Json& e = rows[r][c];
        Complex value;
        if (e.is_array()) {
          const auto pr = numbers(e, where + " entry");
          if (pr.size() != 2) throw InvalidArgument(where + ": complex entries are [re, im]");
          value = Complex(pr[0], pr[1]);
        } else {
          value = number(e, where + " entry");
        }
        q(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = value;
      }
    }
    out.emplace_back(q);
  }
  return out;
}

Json quadrics_to_json(const std::vector<ProjectiveQuadric>& qs) {
  Json list = Json::array();
  for (const auto& q : qs) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < q.q.rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index c = 0; c < q.q.cols(); ++c) {
        const Complex e = q.q(r, c);
        if (e.imag() == 0.0) {
          row.push_back(e.real());
        } else {
          row.push_back(Json::array({e.real(), e.imag()}));
        }
      }
      rows.push_back(row);
    }
    list.push_back(rows);
  }
  return Json{{"n", qs.empty() ? 0 : qs.front().dimension()}, {"quadrics", list}};
}

Json quadric_solutions_to_json(const QuadricSolutionSet& s) {
  auto records = [](const std::vector<ProjectiveLineRecord>& rs) {
    Json out = Json::array();
    for (const auto& r : rs) {
      out.push_back(Json{{"plucker_re", real_parts(r.plucker)},
                         {"plucker_im", imag_parts(r.plucker)},
                         {"real", r.is_real},
                         {"residual", r.residual},
                         {"multiplicity", r.multiplicity},
                         {"at_infinity", r.at_infinity}});
    }
    return out;
  };
  return Json{{"n", s.n},
              {"raw_path_count", s.raw_path_count},
              {"isolated", s.isolated_count()},
              {"excess_paths", s.excess_paths},
              {"extraneous_paths", s.extraneous_paths},
              {"statuses", statuses_to_json(s.statuses)},
              {"records", records(s.records)},
              {"excess", records(s.excess)}};
}

std::string solutions_to_csv(const SolutionSet& s) {
  std::ostringstream out;
  const std::size_t n = s.records.empty() ? 0 : static_cast<std::size_t>(s.records.front().line.v.size());
  out << "index,real,multiplicity,residual";
  for (const char* name : {"p_re", "p_im", "v_re", "v_im"}) {
    for (std::size_t i = 0; i < n; ++i) out << ',' << name << i;
  }
  out << '\n';
  for (std::size_t k = 0; k < s.records.size(); ++k) {
    const auto& r = s.records[k];
    out << k << ',' << (r.is_real ? "true" : "false") << ',' << r.multiplicity << ','
        << format_double(r.residual);
    for (const CVector* x : {&r.line.p, &r.line.v}) {
      for (Eigen::Index i = 0; i < x->size(); ++i) out << ',' << format_double((*x)(i).real());
      for (Eigen::Index i = 0; i < x->size(); ++i) out << ',' << format_double((*x)(i).imag());
    }
    out << '\n';
  }
  return out.str();
}

std::string region_to_csv(const std::vector<RegionClassification>& rows) {
  std::ostringstream out;
  out << "a,r,on_discriminant,all_real,count_real\n";
  for (const auto& r : rows) {
    out << format_double(r.a) << ',' << format_double(r.r) << ','
        << (r.on_discriminant ? "true" : "false") << ',' << (r.all_real ? "true" : "false") << ','
        << r.count_real << '\n';
  }
  return out.str();
}

Json region_to_json(const std::vector<RegionClassification>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back(Json{{"a", r.a},
                       {"r", r.r},
                       {"on_discriminant", r.on_discriminant},
                       {"all_real", r.all_real},
                       {"count_real", r.count_real},
                       {"count_complex", r.count_complex}});
  }
  return out;
}

}  // namespace tangentia::io

// Copyright 2026 The qchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qchan_cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "qchan/qchan.hpp"

namespace qchan::cli {

using io::Json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw NumericalFailure("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {

struct Options {
  std::optional<double> tol;
  std::uint64_t seed = 0;
  int samples = 1000;
  bool base2 = false;
  bool json = false;
  bool text = false;
  bool timing = false;
  std::string out;
  unsigned threads = 0;
  std::vector<std::string> files;
  int m = 2, n = 2, k = 1;
  std::uint64_t index = 0;
  std::string to;
  std::string prefix;
  std::string repr = "kraus";
  int starts = 8;
};

struct Loaded {
  Channel channel;
  std::string path;
  std::string digest;
  std::string representation;
};

Loaded load(const std::string& path, const TolerancePolicy& tol) {
  const std::string text = io::read_text(path);
  const io::ChannelFile f = io::parse_channel_file(io::parse_json_text(text));
  return {io::to_channel(f, tol), path, sha256_hex(text), f.representation};
}

Json herm_json(const HermMatrix& h) { return io::to_json(h.matrix()); }

Json channel_summary(const Channel& l) {
  Json j;
  j["m"] = l.m();
  j["n"] = l.n();
  j["choi_rank"] = l.choi_rank();
  j["min_choi_rank"] = min_choi_rank(l.m(), l.n());
  j["reprojected"] = l.reprojected();
  j["warnings"] = l.warnings();
  return j;
}

Json split_json(const ConvexSplit& s) {
  Json j;
  j["weights"] = Json::array({s.weight, 1.0 - s.weight});
  j["step_plus"] = s.step_plus;
  j["step_minus"] = s.step_minus;
  j["residual"] = s.residual;
  j["first_rank"] = s.first.choi_rank();
  j["second_rank"] = s.second.choi_rank();
  return j;
}

Json verdict_json(const ExtremalityVerdict& v) {
  Json j;
  j["extreme"] = v.extreme;
  j["choi_rank"] = v.choi_rank;
  j["rank_exceeds_m"] = v.rank_exceeds_m;
  j["method_agreement"] = v.method_agreement;
  j["conditioning_flag"] = v.conditioning_flag;
  j["independence"] = {{"independent", v.independence.independent},
                       {"gram_min_singular", v.independence.gram_min_singular},
                       {"near_threshold", v.independence.near_threshold}};
  const RVector& sv = v.nullspace.singular_values;
  j["nullspace"] = {{"extreme", v.nullspace.extreme},
                    {"kernel_dim", v.nullspace.kernel_dim},
                    {"min_singular", sv.size() ? sv.minCoeff() : 0.0},
                    {"near_threshold", v.nullspace.near_threshold}};
  if (v.split) j["split"] = split_json(*v.split);
  return j;
}

Json form22_json(const CanonicalForm22& f) {
  Json j;
  j["U"] = io::to_json(f.U);
  j["V"] = io::to_json(f.V);
  j["y"] = io::to_json(f.y);
  j["c"] = f.c;
  j["s"] = io::to_json(f.s);
  j["residual"] = f.residual;
  j["pattern_residual"] = f.pattern_residual;
  return j;
}

Json class22_json(const ImageClassification22& c) {
  Json j;
  j["class"] = to_string(c.image_class);
  Json outs = Json::array(), ins = Json::array();
  for (const CMatrix& o : c.pure_outputs) outs.push_back(io::to_json(o));
  for (const CVector& x : c.pure_inputs) ins.push_back(io::to_json(x));
  j["pure_inputs"] = std::move(ins);
  j["pure_outputs"] = std::move(outs);
  if (c.second_state_parameter)
    j["second_state_parameter"] = io::to_json(*c.second_state_parameter);
  return j;
}

Json verdict32_json(const Verdict32& v) {
  const CanonicalForm32& f = v.form;
  Json form;
  form["U"] = io::to_json(f.U);
  form["V"] = io::to_json(f.V);
  form["x_eliminated"] = f.x_eliminated;
  for (const auto& [name, val] :
       std::vector<std::pair<const char*, Complex>>{{"x", f.x}, {"y", f.y},
                                                    {"s", f.s}, {"a", f.a},
                                                    {"b", f.b}, {"d", f.d},
                                                    {"f", f.f}})
    form[name] = io::to_json(val);
  form["c"] = f.c;
  form["e"] = f.e;
  form["n_min_eigenvalue"] = f.n_min_eigenvalue;
  Json j;
  j["extreme"] = v.extreme;
  j["case"] = to_string(v.case_tag);
  j["canonical_form"] = std::move(form);
  if (v.zw) j["zw"] = Json::array({io::to_json(v.zw->first), io::to_json(v.zw->second)});
  if (v.case1)
    j["w22_decomposition"] = {{"weight", v.case1->weight},
                              {"U1", io::to_json(v.case1->u1)},
                              {"U2", io::to_json(v.case1->u2)}};
  if (v.split) j["split"] = split_json(*v.split);
  j["general_extreme"] = v.general_extreme;
  j["agrees_with_general"] = v.agrees_with_general;
  j["conditioning_flag"] = v.conditioning_flag;
  return j;
}

Json entropy_json(const EntropyResult& r, double unit) {
  Json j;
  j["s_min_estimate"] = r.s_min_estimate / unit;
  j["certified_zero"] = r.certified_zero;
  j["purity_defect"] = r.purity_defect;
  j["argmin_state"] = io::to_json(r.argmin_state);
  j["evaluations"] = r.evaluations;
  j["method"] = r.method;
  return j;
}

// Text output: nested keys, numbers to 6 significant digits.
std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string scalar_text(const Json& j) {
  if (j.is_number_float()) return fmt6(j.get<double>());
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "null";
  if (j.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < j.size(); ++i)
      s += (i ? ", " : "") + scalar_text(j[i]);
    return s + "]";
  }
  return j.dump();
}

void render_text(const Json& j, const std::string& indent, std::ostream& os) {
  for (const auto& [key, val] : j.items()) {
    if (val.is_object()) {
      os << indent << key << ":\n";
      render_text(val, indent + "  ", os);
    } else if (val.is_array() && !val.empty() && val[0].is_array() &&
               !val[0].empty() && val[0][0].is_array()) {
      os << indent << key << ":\n";
      for (const Json& row : val) os << indent << "  " << scalar_text(row) << "\n";
    } else {
      os << indent << key << ": " << scalar_text(val) << "\n";
    }
  }
}

void write_output(const std::string& content, const Options& o,
                  std::ostream& out) {
  if (o.out.empty()) {
    out << content;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw FormatError("cannot write " + o.out);
  f << content;
}

void emit(const Json& report, const Options& o, std::ostream& out) {
  if (o.text) {
    std::ostringstream ss;
    render_text(report, "", ss);
    write_output(ss.str(), o, out);
  } else {
    write_output(report.dump(2) + "\n", o, out);
  }
}

void write_channel_file(const std::string& path, const Json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot write " + path);
  f << j.dump(2) << "\n";
}

Json header(const std::string& command, const std::vector<const Loaded*>& in,
            const TolerancePolicy& tol) {
  Json j;
  j["command"] = command;
  Json inputs = Json::array();
  for (const Loaded* l : in)
    inputs.push_back({{"path", l->path}, {"sha256", l->digest}});
  j["inputs"] = std::move(inputs);
  j["tolerances"] = io::to_json(tol);
  return j;
}

Json analyze(const Loaded& in, const TolerancePolicy& tol) {
  const Channel& l = in.channel;
  Json r = header("analyze", {&in}, tol);
  r["parameters"] = Json::object();
  Json res;
  res["channel"] = channel_summary(l);
  const ChannelReport rep = validate(l.choi().hermitian(), l.m(), l.n(), tol);
  res["validation"] = {{"is_cp", rep.is_cp},
                       {"is_tp", rep.is_tp},
                       {"is_unital", rep.is_unital},
                       {"min_choi_eigenvalue", rep.min_choi_eigenvalue},
                       {"block_trace_residual", rep.block_trace_residual},
                       {"unital_residual", rep.unital_residual}};
  res["extremality"] = verdict_json(is_extreme(l));
  const ImageRankReport ir = image_rank_report(l);
  res["image_rank"] = {{"l", ir.l},
                       {"r", ir.r},
                       {"p", ir.p},
                       {"rank_one_guaranteed", ir.rank_one_guaranteed}};
  if (l.m() == 2 && l.n() == 2 && l.choi_rank() == 2) {
    const CanonicalForm22 f = canonical_form_22(l);
    Json q = form22_json(f);
    q["class"] = to_string(classify_image_22(f).image_class);
    res["qubit_classification"] = std::move(q);
  }
  if (l.m() == 3 && l.n() == 2 && (l.choi_rank() == 2 || l.choi_rank() == 3)) {
    const Verdict32 v = is_extreme_32(l);
    res["qutrit_to_qubit"] = {{"extreme", v.extreme},
                              {"case", to_string(v.case_tag)},
                              {"agrees_with_general", v.agrees_with_general}};
  }
  r["result"] = std::move(res);
  return r;
}

Json split_command(const Loaded& in, const Options& o,
                   const TolerancePolicy& tol) {
  const Channel& l = in.channel;
  const ExtremalityVerdict v = is_extreme(l);
  if (v.extreme || !v.split)
    throw PreconditionError("channel is extreme; no convex split exists");
  std::string prefix = o.prefix;
  if (prefix.empty()) {
    prefix = in.path == "-" ? std::string("split") : in.path;
    if (prefix.size() > 5 && prefix.substr(prefix.size() - 5) == ".json")
      prefix.resize(prefix.size() - 5);
    prefix += "_split";
  }
  const std::string p1 = prefix + "_1.json", p2 = prefix + "_2.json";
  write_channel_file(p1, io::channel_to_json(v.split->first));
  write_channel_file(p2, io::channel_to_json(v.split->second));
  Json r = header("split", {&in}, tol);
  r["parameters"] = {{"prefix", prefix}};
  Json res = split_json(*v.split);
  res["files"] = Json::array({p1, p2});
  res["witness"] = herm_json(*v.witness);
  r["result"] = std::move(res);
  return r;
}

Json classify22(const Loaded& in, const TolerancePolicy& tol,
                std::uint64_t seed) {
  const Channel& l = in.channel;
  if (l.m() != 2 || l.n() != 2)
    throw PreconditionError("classify22 needs a 2 -> 2 channel");
  SearchConfig sc;
  sc.seed = seed;
  const CanonicalForm22 f = canonical_form_22(l, sc);
  Json r = header("classify22", {&in}, tol);
  r["parameters"] = {{"seed", seed}};
  Json res;
  res["canonical_form"] = form22_json(f);
  res["image"] = class22_json(classify_image_22(f));
  const ExtremalityVerdict v = is_extreme_22(l);
  res["extreme"] = v.extreme;
  res["is_unital"] = validate(l.choi().hermitian(), 2, 2, tol).is_unital;
  r["result"] = std::move(res);
  return r;
}

Json classify32(const Loaded& in, const TolerancePolicy& tol,
                std::uint64_t seed) {
  SearchConfig sc;
  sc.seed = seed;
  const Verdict32 v = is_extreme_32(in.channel, sc);
  Json r = header("classify32", {&in}, tol);
  r["parameters"] = {{"seed", seed}};
  r["result"] = verdict32_json(v);
  return r;
}

EntropyConfig entropy_config(const Options& o) {
  EntropyConfig c;
  c.seed = o.seed;
  c.starts = o.starts;
  return c;
}

Json entropy_command(const Loaded& in, const Options& o,
                     const TolerancePolicy& tol) {
  const double unit = o.base2 ? std::log(2.0) : 1.0;
  Json r = header("entropy", {&in}, tol);
  r["parameters"] = {{"seed", o.seed},
                     {"starts", o.starts},
                     {"units", o.base2 ? "bits" : "nats"}};
  r["result"] = entropy_json(min_output_entropy(in.channel, entropy_config(o)), unit);
  return r;
}

Json additivity_command(const Loaded& a, const Loaded& b, const Options& o,
                        const TolerancePolicy& tol) {
  const double unit = o.base2 ? std::log(2.0) : 1.0;
  const AdditivityResult ar =
      additivity_check(a.channel, b.channel, entropy_config(o));
  Json r = header("additivity", {&a, &b}, tol);
  r["parameters"] = {{"seed", o.seed},
                     {"starts", o.starts},
                     {"units", o.base2 ? "bits" : "nats"}};
  Json res;
  res["s1"] = ar.s1 / unit;
  res["s2"] = ar.s2 / unit;
  res["s12"] = ar.s12 / unit;
  res["gap"] = ar.gap / unit;
  res["certified_zero"] = Json::array({ar.first.certified_zero,
                                       ar.second.certified_zero,
                                       ar.joint.certified_zero});
  res["first"] = entropy_json(ar.first, unit);
  res["second"] = entropy_json(ar.second, unit);
  res["joint"] = entropy_json(ar.joint, unit);
  r["result"] = std::move(res);
  return r;
}

std::string experiment_csv(const SamplerConfig& cfg, const ExperimentResult& e) {
  std::ostringstream ss;
  ss << "seed,m,n,k,count,fraction_extreme,flagged\n"
     << cfg.seed << "," << cfg.m << "," << cfg.n << "," << cfg.k << ","
     << e.count << "," << fmt6(e.fraction_extreme) << "," << e.flagged << "\n";
  return ss.str();
}

int code_for(const std::exception& e) {
  if (dynamic_cast<const NotAChannel*>(&e)) return kNotAChannel;
  if (dynamic_cast<const PreconditionError*>(&e)) return kPrecondition;
  if (dynamic_cast<const FormatError*>(&e) || dynamic_cast<const ShapeError*>(&e) ||
      dynamic_cast<const InvalidArgument*>(&e))
    return kUsage;
  return kNumerical;
}

const char* label_for(int code) {
  switch (code) {
    case kUsage: return "invalid input";
    case kNotAChannel: return "not a channel";
    case kPrecondition: return "precondition violated";
    default: return "numerical failure";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"qchan: analysis of finite-dimensional quantum channels", "qchan"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", o.tol, "relative rank tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--samples", o.samples, "number of samples")
      ->check(CLI::PositiveNumber);
  app.add_flag("--base2", o.base2, "report entropies in bits");
  auto* fj = app.add_flag("--json", o.json, "JSON report (default)");
  auto* ft = app.add_flag("--text", o.text, "text report");
  fj->excludes(ft);
  app.add_flag("--timing", o.timing, "include wall time in the report");
  app.add_option("--out", o.out, "write the report to a file");
  app.add_option("--threads", o.threads, "worker threads for experiment");

  auto file_cmd = [&](const char* name, const char* help, int nfiles = 1) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("files", o.files, "channel file(s), - for stdin")
        ->required()
        ->expected(nfiles);
    return c;
  };
  auto* c_analyze = file_cmd("analyze", "validate and analyze a channel");
  auto* c_convert = file_cmd("convert", "convert between kraus and choi");
  c_convert->add_option("--to", o.to, "target representation")
      ->check(CLI::IsMember({"kraus", "choi"}));
  auto* c_split = file_cmd("split", "convex split of a non-extreme channel");
  c_split->add_option("--prefix", o.prefix, "output file prefix");
  auto* c_c22 = file_cmd("classify22", "canonical form of a 2 -> 2 channel");
  auto* c_c32 = file_cmd("classify32", "extremality of a 3 -> 2 channel");
  auto* c_ent = file_cmd("entropy", "minimum output entropy");
  c_ent->add_option("--starts", o.starts, "descent starts")
      ->check(CLI::PositiveNumber);
  auto* c_add = file_cmd("additivity", "tensor additivity gap", 2);
  c_add->add_option("--starts", o.starts, "descent starts")
      ->check(CLI::PositiveNumber);
  auto dims = [&](CLI::App* c) {
    c->add_option("--m", o.m, "input dimension")->check(CLI::PositiveNumber);
    c->add_option("--n", o.n, "output dimension")->check(CLI::PositiveNumber);
    c->add_option("--k", o.k, "Choi rank")->check(CLI::PositiveNumber);
  };
  auto* c_gen = app.add_subcommand("generate", "sample a random channel");
  dims(c_gen);
  c_gen->add_option("--index", o.index, "sample index");
  c_gen->add_option("--repr", o.repr, "representation")
      ->check(CLI::IsMember({"kraus", "choi"}));
  auto* c_exp = app.add_subcommand("experiment", "fraction of extreme samples");
  dims(c_exp);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  TolerancePolicy tol;
  if (o.tol) tol.rank_rel_tol = *o.tol;
  const auto t0 = std::chrono::steady_clock::now();
  auto finish = [&](Json report) {
    if (o.timing)
      report["wall_time_s"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
    emit(report, o, out);
  };

  try {
    if (*c_analyze) {
      finish(analyze(load(o.files[0], tol), tol));
    } else if (*c_convert) {
      const Loaded in = load(o.files[0], tol);
      std::string to = o.to;
      if (to.empty()) to = in.representation == "choi" ? "kraus" : "choi";
      write_output(io::channel_to_json(in.channel, to).dump(2) + "\n", o, out);
    } else if (*c_split) {
      finish(split_command(load(o.files[0], tol), o, tol));
    } else if (*c_c22) {
      finish(classify22(load(o.files[0], tol), tol, o.seed));
    } else if (*c_c32) {
      finish(classify32(load(o.files[0], tol), tol, o.seed));
    } else if (*c_ent) {
      finish(entropy_command(load(o.files[0], tol), o, tol));
    } else if (*c_add) {
      finish(additivity_command(load(o.files[0], tol), load(o.files[1], tol), o,
                                tol));
    } else if (*c_gen) {
      SamplerConfig cfg{o.seed, o.m, o.n, o.k, 1};
      cfg.check();
      write_output(
          io::channel_to_json(sample_channel(cfg, o.index, tol), o.repr).dump(2) +
              "\n",
          o, out);
    } else if (*c_exp) {
      SamplerConfig cfg{o.seed, o.m, o.n, o.k, o.samples};
      const unsigned threads =
          o.threads ? o.threads : std::max(1u, std::thread::hardware_concurrency());
      const ExperimentResult e = extreme_fraction_experiment(cfg, tol, threads);
      if (o.json) {
        Json r = header("experiment", {}, tol);
        r["parameters"] = {{"seed", cfg.seed}, {"m", cfg.m}, {"n", cfg.n},
                           {"k", cfg.k},       {"count", cfg.count}};
        r["result"] = {{"fraction_extreme", e.fraction_extreme},
                       {"extreme", e.extreme},
                       {"unflagged", e.unflagged},
                       {"flagged", e.flagged},
                       {"count", e.count}};
        finish(r);
      } else {
        write_output(experiment_csv(cfg, e), o, out);
      }
    }
  } catch (const std::exception& e) {
    const int code = code_for(e);
    err << "qchan: " << label_for(code) << ": " << e.what() << "\n";
    return code;
  }
  return kOk;
}

}  // namespace qchan::cli

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bsm/mub.hpp"
#include "bsm/ot.hpp"
#include "bsm/wse.hpp"

namespace bsm {

using nlohmann::json;

// Bit vectors travel as '0'/'1' strings; t-bit integers as their big-endian
// binary expansion, so the string form matches lexicographic conventions.

inline std::string bits_to_string(const BitVec& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

inline BitVec bits_from_string(const std::string& s) {
  BitVec bits;
  bits.reserve(s.size());
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("bad bit string");
    bits.push_back(ch == '1' ? 1 : 0);
  }
  return bits;
}

inline std::string word_to_string(std::uint64_t w, int t) {
  std::string s(t, '0');
  for (int i = 0; i < t; ++i)
    if ((w >> (t - 1 - i)) & 1) s[i] = '1';
  return s;
}

inline std::uint64_t word_from_string(const std::string& s) {
  std::uint64_t w = 0;
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("bad bit string");
    w = (w << 1) | static_cast<std::uint64_t>(ch == '1');
  }
  return w;
}

inline json to_json(const WseTranscript& t) {
  return json{{"n", t.n},
              {"d", t.d},
              {"x", t.x},
              {"theta", t.theta},
              {"theta_tilde", t.theta_tilde},
              {"outcomes", t.outcomes},
              {"index_set", t.index_set},
              {"x_I", t.x_I},
              {"seed", t.seed}};
}

inline WseTranscript wse_transcript_from_json(const json& j) {
  WseTranscript t;
  t.n = j.at("n").get<int>();
  t.d = j.at("d").get<int>();
  t.x = j.at("x").get<std::vector<int>>();
  t.theta = j.at("theta").get<std::vector<int>>();
  t.theta_tilde = j.at("theta_tilde").get<std::vector<int>>();
  t.outcomes = j.at("outcomes").get<std::vector<int>>();
  t.index_set = j.at("index_set").get<std::vector<int>>();
  t.x_I = j.at("x_I").get<std::vector<int>>();
  t.seed = j.at("seed").get<std::uint64_t>();
  return t;
}

inline json to_json(const IhTranscript& ih) {
  json queries = json::array();
  for (std::uint64_t q : ih.queries) queries.push_back(word_to_string(q, ih.t));
  std::string responses;
  for (auto r : ih.responses) responses.push_back(r ? '1' : '0');
  return json{{"t", ih.t},
              {"queries", queries},
              {"responses", responses},
              {"w0", word_to_string(ih.w0, ih.t)},
              {"w1", word_to_string(ih.w1, ih.t)}};
}

inline IhTranscript ih_transcript_from_json(const json& j) {
  IhTranscript ih;
  ih.t = j.at("t").get<int>();
  for (const auto& q : j.at("queries")) ih.queries.push_back(word_from_string(q.get<std::string>()));
  ih.responses = bits_from_string(j.at("responses").get<std::string>());
  ih.w0 = word_from_string(j.at("w0").get<std::string>());
  ih.w1 = word_from_string(j.at("w1").get<std::string>());
  return ih;
}

inline json to_json(const ExtractorSeed& seed) {
  return json{{"input_bits", seed.input_bits}, {"ell", seed.ell},
              {"diag", bits_to_string(seed.diag)}};
}

inline ExtractorSeed extractor_seed_from_json(const json& j) {
  return make_extractor_seed(j.at("input_bits").get<int>(), j.at("ell").get<int>(),
                             bits_from_string(j.at("diag").get<std::string>()));
}

inline json to_json(const FrotTranscript& t) {
  return json{{"n", t.n},
              {"d", t.d},
              {"m", t.m},
              {"beta", t.beta},
              {"eta", t.eta},
              {"t", t.t},
              {"ell", t.ell},
              {"x", t.x},
              {"index_set", t.index_set},
              {"index_set_truncated", t.index_set_truncated},
              {"fallback", t.fallback},
              {"w", word_to_string(t.w, t.t)},
              {"perm", t.perm},
              {"ih", to_json(t.ih)},
              {"r0", to_json(t.r0)},
              {"r1", to_json(t.r1)},
              {"s0", bits_to_string(t.s0)},
              {"s1", bits_to_string(t.s1)},
              {"c", t.c},
              {"y", bits_to_string(t.y)},
              {"seed", t.seed}};
}

inline FrotTranscript frot_transcript_from_json(const json& j) {
  FrotTranscript t;
  t.n = j.at("n").get<int>();
  t.d = j.at("d").get<int>();
  t.m = j.at("m").get<int>();
  t.beta = j.at("beta").get<int>();
  t.eta = j.at("eta").get<int>();
  t.t = j.at("t").get<int>();
  t.ell = j.at("ell").get<int>();
  t.x = j.at("x").get<std::vector<int>>();
  t.index_set = j.at("index_set").get<std::vector<int>>();
  t.index_set_truncated = j.at("index_set_truncated").get<std::vector<int>>();
  t.fallback = j.at("fallback").get<bool>();
  t.w = word_from_string(j.at("w").get<std::string>());
  t.perm = j.at("perm").get<std::vector<int>>();
  t.ih = ih_transcript_from_json(j.at("ih"));
  t.r0 = extractor_seed_from_json(j.at("r0"));
  t.r1 = extractor_seed_from_json(j.at("r1"));
  t.s0 = bits_from_string(j.at("s0").get<std::string>());
  t.s1 = bits_from_string(j.at("s1").get<std::string>());
  t.c = j.at("c").get<int>();
  t.y = bits_from_string(j.at("y").get<std::string>());
  t.seed = j.at("seed").get<std::uint64_t>();
  return t;
}

// Debug dump: bases as tables of [re, im] pairs.
inline json to_json(const MubFamily& family) {
  json bases = json::array();
  for (const Basis& basis : family.bases) {
    json vectors = json::array();
    for (const StateVec& vec : basis.vectors) {
      json amps = json::array();
      for (const Complex& amp : vec) amps.push_back(json::array({amp.real(), amp.imag()}));
      vectors.push_back(amps);
    }
    bases.push_back(vectors);
  }
  return json{{"d", family.d()}, {"bases", bases}};
}

}  // namespace bsm

#pragma once

#include <memory>
#include <string>

#include <vector>

#include "hyp/constants.hpp"
#include "hyp/presentation.hpp"
#include "hyp/subgroup.hpp"

namespace fx {

inline std::shared_ptr<const hyp::GroupPresentation> make(const std::string& text) {
  return std::make_shared<hyp::GroupPresentation>(hyp::parse_presentation(text));
}

inline std::shared_ptr<const hyp::GroupPresentation> free2() {
  return make("[group]\nname = F2\ngenerators = a b\n");
}

inline std::shared_ptr<const hyp::GroupPresentation> surface2() {
  return make("[group]\nname = S2\ngenerators = a b c d\nrelators = abABcdCD\n");
}

// closed non-orientable surface of genus 4
inline std::shared_ptr<const hyp::GroupPresentation> nonorientable4() {
  return make("[group]\nname = N4\ngenerators = a b c d\nrelators = aabbccdd\n");
}

inline hyp::Word w(const hyp::GroupPresentation& p, const std::string& s) {
  return p.alphabet().parse(s);
}

inline std::shared_ptr<const hyp::SubgroupContext> subgroup(std::shared_ptr<const hyp::GroupPresentation> p,
                                                          const std::vector<std::string>& gens, int Q = 0,
                                                          const std::string& lambda = "1",
                                                          const std::string& eps = "0") {
  std::vector<hyp::Word> ws;
  for (const auto& g : gens) ws.push_back(p->alphabet().parse(g));
  return std::make_shared<hyp::SubgroupContext>(p, ws, Q, hyp::parse_rational(lambda), hyp::parse_rational(eps));
}

inline hyp::ConstantLedger desk(int r, int K, int R, int Q = 0, int delta = 0) {
  hyp::ConstantInputs in;
  in.Q = Q;
  in.delta = delta;
  return hyp::desk_constants(in, r, K, R);
}

}  // namespace fx

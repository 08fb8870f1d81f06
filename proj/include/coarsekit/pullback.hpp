#pragma once

#include "coarsekit/chain.hpp"
#include "coarsekit/coarse_map.hpp"

#include <string>
#include <vector>

namespace coarsekit {

class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, Rational required) : Error(what), required_(required) {}
  /// Smallest target scale that would have been accepted.
  const Rational& required() const { return required_; }

 private:
  Rational required_;
};

/// Preimages of a target decomposition. If the target scale S satisfies
/// S >= upper(R), pieces at target distance > S pull back to pieces at
/// source distance > R, so the result is an R-decomposition of the preimages
/// of the target members.
inline RDecomposition pullback_decomposition(const CoarseMap& f, const RDecomposition& d, const Rational& r) {
  if (r <= 0) throw Error("pullback: scale must be positive");
  const Rational need = f.upper(r);
  if (d.scale < need)
    throw PreconditionError("pullback: target scale " + to_string(d.scale) + " is below upper(" + to_string(r) +
                                ") = " + to_string(need),
                            need);
  RDecomposition out{r, {}, d.partition};
  for (const auto& sp : d.splits) {
    Split pulled{f.preimage(sp.member), {}, {}};
    if (pulled.member.empty()) continue;
    for (const auto& piece : sp.v1)
      if (auto p = f.preimage(piece); !p.empty()) pulled.v1.push_back(std::move(p));
    for (const auto& piece : sp.v2)
      if (auto p = f.preimage(piece); !p.empty()) pulled.v2.push_back(std::move(p));
    out.splits.push_back(std::move(pulled));
  }
  return out;
}

/// Step-wise pullback along a source schedule. The final bound is
/// sup{t : lower(t) <= mesh of the target's final family}.
inline DecompositionChain pullback_chain(const CoarseMap& f, const DecompositionChain& c,
                                         const std::vector<Rational>& source_schedule) {
  if (auto why = Schedule::problem(source_schedule)) throw Error("pullback_chain: " + *why);
  if (source_schedule.size() < c.steps.size())
    throw Error("pullback_chain: source schedule shorter than the chain");
  DecompositionChain out;
  out.space = f.source->name();
  out.partition = c.partition;
  out.complete = c.complete;
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const Rational need = f.upper(source_schedule[i]);
    if (c.steps[i].scale < need)
      throw PreconditionError("pullback_chain: step " + std::to_string(i + 1) + " target scale " +
                                  to_string(c.steps[i].scale) + " is below upper(" + to_string(source_schedule[i]) +
                                  ") = " + to_string(need),
                              need);
    out.steps.push_back(pullback_decomposition(f, c.steps[i], source_schedule[i]));
    out.schedule.push_back(source_schedule[i]);
  }
  auto sup = f.lower.sup_preimage(mesh(*f.target, c.final_family(*f.target)));
  if (!sup) throw Error("pullback_chain: lower control is bounded, no mesh bound can be transferred");
  out.bound = std::max(*sup, Rational(0));
  return out;
}

}  // namespace coarsekit

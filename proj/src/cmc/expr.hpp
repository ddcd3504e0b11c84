#pragma once

// Minimal arithmetic grammar for user-supplied warping profiles A(t):
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | 't' | 'pi' | 'e' | func '(' expr [',' expr] ')' | '(' expr ')'
// Functions: exp log sqrt sin cos sinh cosh tanh pow.

#include <memory>
#include <string>
#include <vector>

#include "cmc/common.hpp"
#include "cmc/taylor.hpp"

namespace cmc {

class Expression {
 public:
  static Expression parse(const std::string& text);

  using Jet = Taylor<real, 4>;
  // Value and first four derivatives at t, exact up to rounding.
  Jet eval(real t) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace cmc

#ifndef STACKY_ERROR_HPP
#define STACKY_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace stacky {

enum class Errc {
  ParseError,
  NotMonic,
  Reducible,
  Unsupported,
  DivisionByZero,
  NotPrime,
  OrderNotMaximalAtPrime,
  ZeroElement,
  UnitElement,
  NegativeValuation,
  ZeroArgument,
  InvalidModel,
  NotPID,
  PreconditionViolated,
  GlobalCheckInconclusive,
  UnsupportedDegree,
  SearchExhausted,
  MalformedInput,
  InternalInconsistency,
};

inline std::string_view errc_name(Errc c)
{
  switch (c) {
    case Errc::ParseError: return "ParseError";
    case Errc::NotMonic: return "NotMonic";
    case Errc::Reducible: return "Reducible";
    case Errc::Unsupported: return "Unsupported";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::NotPrime: return "NotPrime";
    case Errc::OrderNotMaximalAtPrime: return "OrderNotMaximalAtPrime";
    case Errc::ZeroElement: return "ZeroElement";
    case Errc::UnitElement: return "UnitElement";
    case Errc::NegativeValuation: return "NegativeValuation";
    case Errc::ZeroArgument: return "ZeroArgument";
    case Errc::InvalidModel: return "InvalidModel";
    case Errc::NotPID: return "NotPID";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::GlobalCheckInconclusive: return "GlobalCheckInconclusive";
    case Errc::UnsupportedDegree: return "UnsupportedDegree";
    case Errc::SearchExhausted: return "SearchExhausted";
    case Errc::MalformedInput: return "MalformedInput";
    case Errc::InternalInconsistency: return "InternalInconsistency";
  }
  return "Unknown";
}

/* Every failure raised by the engine carries one of the codes above. */
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
  {
  }
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace stacky

#endif

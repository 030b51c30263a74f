#ifndef HYCOL_ERRORS_HPP
#define HYCOL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hycol {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EdgeArityError : Error { using Error::Error; };
struct VertexOutOfRangeError : Error { using Error::Error; };
struct InvalidQError : Error { using Error::Error; };
struct ColourOutOfRangeError : Error { using Error::Error; };
struct BucketOutOfRangeError : Error { using Error::Error; };
struct BudgetExceededError : Error { using Error::Error; };
struct EmptySupportError : Error { using Error::Error; };
struct InvalidInputError : Error { using Error::Error; };
struct InfeasibleError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

} // namespace hycol

#endif // HYCOL_ERRORS_HPP

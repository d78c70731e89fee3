#ifndef MLAB_ERROR_HPP
#define MLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define MLAB_ERROR(name) \
  struct name : Error {  \
    using Error::Error;  \
  }

MLAB_ERROR(DimensionMismatch);
MLAB_ERROR(FieldMismatch);
MLAB_ERROR(NotNilpotent);
MLAB_ERROR(NoSolution);
MLAB_ERROR(PreconditionViolated);
MLAB_ERROR(SpectrumNotSplit);
MLAB_ERROR(ConeMismatch);
MLAB_ERROR(InternalInconsistency);
MLAB_ERROR(MembershipLost);
MLAB_ERROR(NotRankOne);
MLAB_ERROR(NotInterior);
MLAB_ERROR(UndefinedPair);
MLAB_ERROR(NotPure);
MLAB_ERROR(NotStandardLogPoint);
MLAB_ERROR(NotUnipotent);
MLAB_ERROR(SchemaError);
MLAB_ERROR(ValidationFailed);
MLAB_ERROR(NotAdmissible);
MLAB_ERROR(ComplexNotClosed);

#undef MLAB_ERROR

}  // namespace mlab

#endif  // MLAB_ERROR_HPP

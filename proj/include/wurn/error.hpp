#pragma once

#include <stdexcept>
#include <string>

namespace wurn {

/// Base class for all library errors.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or malformed model inputs.
class ValidationError : public Error
{
  public:
    using Error::Error;
};

/// Raw data could not be converted into a dataset.
class IngestError : public Error
{
  public:
    using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error
{
  public:
    using Error::Error;
};

}  // namespace wurn

#include <weave/error.h>

namespace weave
{
const char* to_string(const ErrorKind kind)
{
        switch (kind)
        {
        case ErrorKind::parameter:
                return "parameter error";
        case ErrorKind::structural:
                return "structural error";
        case ErrorKind::numeric:
                return "numeric error";
        case ErrorKind::invariant:
                return "invariant violation";
        case ErrorKind::divergence:
                return "training divergence";
        case ErrorKind::data:
                return "data error";
        case ErrorKind::io:
                return "I/O error";
        case ErrorKind::config:
                return "config error";
        }
        return "error";
}

Error::Error(const ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message),
          kind_(kind),
          detail_(message)
{
}

void fail(const ErrorKind kind, const std::string& message)
{
        throw Error(kind, message);
}
}

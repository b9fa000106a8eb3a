#pragma once

#include <stdexcept>
#include <string>

namespace levelcurve {

// Bad parameters or malformed inputs, detected before any computation runs.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem or codec failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class NonPositiveSigma : public ValidationError {
public:
    NonPositiveSigma() : ValidationError("sigma must be > 0") {}
};

class NonPositiveEps : public ValidationError {
public:
    NonPositiveEps() : ValidationError("eps must be > 0") {}
};

class RectOutOfBounds : public ValidationError {
public:
    RectOutOfBounds() : ValidationError("rectangle not inside the image domain") {}
};

class ShapeOutOfBounds : public ValidationError {
public:
    ShapeOutOfBounds() : ValidationError("shape not inside the canvas") {}
};

class EmptyRegion : public ValidationError {
public:
    EmptyRegion() : ValidationError("region mask selects no pixels") {}
};

class DimMismatch : public ValidationError {
public:
    explicit DimMismatch(const std::string& msg = "dimension mismatch") : ValidationError(msg) {}
};

class EmptyTrainingSet : public ValidationError {
public:
    EmptyTrainingSet() : ValidationError("training set is empty") {}
};

class TooFewSamples : public ValidationError {
public:
    explicit TooFewSamples(const std::string& msg = "too few samples") : ValidationError(msg) {}
};

class ParamOrder : public ValidationError {
public:
    explicit ParamOrder(const std::string& msg = "parameter ordering violated") : ValidationError(msg) {}
};

class ConstantImage : public ValidationError {
public:
    ConstantImage() : ValidationError("image has fewer than two distinct intensities") {}
};

class UnsupportedFormat : public IoError {
public:
    explicit UnsupportedFormat(const std::string& msg) : IoError(msg) {}
};

class CorruptHeader : public IoError {
public:
    explicit CorruptHeader(const std::string& msg) : IoError(msg) {}
};

class TruncatedData : public IoError {
public:
    explicit TruncatedData(const std::string& msg) : IoError(msg) {}
};

} // namespace levelcurve

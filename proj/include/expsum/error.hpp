#pragma once

#include <stdexcept>
#include <string>

namespace expsum {

/// Base of every failure raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (bad modulus, bad sign, ...).
class invalid_input : public error {
public:
    using error::error;
};

/// Residue has no inverse modulo its modulus.
class not_invertible : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// Moduli handed to the CRT were not pairwise coprime.
class not_coprime : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// A character was paired with a sum of a different modulus.
class modulus_mismatch : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// Even moduli (or p = 2 components) are outside the character machinery.
class unsupported_modulus : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// Evaluation requested at a pole or outside the domain of analyticity.
class pole_error : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// Adaptive quadrature failed to reach its tolerance.
class quadrature_error : public error {
public:
    using error::error;
};

/// The prime sieve would have to exceed its configured cap.
class sieve_limit_error : public error {
public:
    using error::error;
};

/// An exhaustive self-check inside an algorithm failed.
class verification_error : public error {
public:
    using error::error;
};

} // namespace expsum

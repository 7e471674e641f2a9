#pragma once

#include <string>

namespace ontomem::vocab {

inline const std::string kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline const std::string kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline const std::string kOwl = "http://www.w3.org/2002/07/owl#";
inline const std::string kXsd = "http://www.w3.org/2001/XMLSchema#";
inline const std::string kSh = "http://www.w3.org/ns/shacl#";
// Engine-reserved vocabulary (explicit negation, registry bookkeeping).
inline const std::string kSys = "urn:ontomem:sys#";

namespace rdf {
inline const std::string type = kRdf + "type";
inline const std::string langString = kRdf + "langString";
inline const std::string first = kRdf + "first";
inline const std::string rest = kRdf + "rest";
inline const std::string nil = kRdf + "nil";
inline const std::string subject = kRdf + "subject";
inline const std::string predicate = kRdf + "predicate";
inline const std::string object = kRdf + "object";
inline const std::string Statement = kRdf + "Statement";
}  // namespace rdf

namespace rdfs {
inline const std::string subClassOf = kRdfs + "subClassOf";
inline const std::string subPropertyOf = kRdfs + "subPropertyOf";
inline const std::string domain = kRdfs + "domain";
inline const std::string range = kRdfs + "range";
inline const std::string label = kRdfs + "label";
}  // namespace rdfs

namespace owl {
inline const std::string inverseOf = kOwl + "inverseOf";
inline const std::string SymmetricProperty = kOwl + "SymmetricProperty";
inline const std::string TransitiveProperty = kOwl + "TransitiveProperty";
inline const std::string FunctionalProperty = kOwl + "FunctionalProperty";
inline const std::string disjointWith = kOwl + "disjointWith";
}  // namespace owl

namespace xsd {
inline const std::string string = kXsd + "string";
inline const std::string integer = kXsd + "integer";
inline const std::string decimal = kXsd + "decimal";
inline const std::string double_ = kXsd + "double";
inline const std::string boolean = kXsd + "boolean";
inline const std::string date = kXsd + "date";
}  // namespace xsd

namespace sh {
inline const std::string NodeShape = kSh + "NodeShape";
inline const std::string PropertyShape = kSh + "PropertyShape";
inline const std::string targetClass = kSh + "targetClass";
inline const std::string property = kSh + "property";
inline const std::string path = kSh + "path";
inline const std::string minCount = kSh + "minCount";
inline const std::string maxCount = kSh + "maxCount";
inline const std::string datatype = kSh + "datatype";
inline const std::string class_ = kSh + "class";
inline const std::string in = kSh + "in";
inline const std::string pattern = kSh + "pattern";
inline const std::string closed = kSh + "closed";
}  // namespace sh

namespace sys {
inline const std::string not_ = kSys + "not";
inline const std::string registry = kSys + "registry";
inline const std::string alias = kSys + "alias";
inline const std::string ambiguousAlias = kSys + "ambiguousAlias";
inline const std::string entityType = kSys + "entityType";
inline const std::string firstSeenSource = kSys + "firstSeenSource";
inline const std::string firstSeenChunk = kSys + "firstSeenChunk";
inline const std::string firstSeenAt = kSys + "firstSeenAt";
inline const std::string firstSeenConfidence = kSys + "firstSeenConfidence";
inline const std::string firstSeenOrigin = kSys + "firstSeenOrigin";
}  // namespace sys

}  // namespace ontomem::vocab

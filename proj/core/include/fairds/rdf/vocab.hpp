// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

// Namespace and term IRIs used across the library.
namespace fairds::vocab
{

namespace rdf
{
    inline constexpr std::string_view ns = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    inline constexpr std::string_view type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    inline constexpr std::string_view langString = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
    inline constexpr std::string_view first = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
    inline constexpr std::string_view rest = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
    inline constexpr std::string_view nil = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
} // namespace rdf

namespace rdfs
{
    inline constexpr std::string_view ns = "http://www.w3.org/2000/01/rdf-schema#";
    inline constexpr std::string_view Literal = "http://www.w3.org/2000/01/rdf-schema#Literal";
} // namespace rdfs

namespace xsd
{
    inline constexpr std::string_view ns = "http://www.w3.org/2001/XMLSchema#";
    inline constexpr std::string_view string = "http://www.w3.org/2001/XMLSchema#string";
    inline constexpr std::string_view dateTime = "http://www.w3.org/2001/XMLSchema#dateTime";
    inline constexpr std::string_view date = "http://www.w3.org/2001/XMLSchema#date";
    inline constexpr std::string_view integer = "http://www.w3.org/2001/XMLSchema#integer";
    inline constexpr std::string_view decimal = "http://www.w3.org/2001/XMLSchema#decimal";
    inline constexpr std::string_view boolean = "http://www.w3.org/2001/XMLSchema#boolean";
} // namespace xsd

namespace sh
{
    inline constexpr std::string_view ns = "http://www.w3.org/ns/shacl#";
    inline constexpr std::string_view NodeShape = "http://www.w3.org/ns/shacl#NodeShape";
    inline constexpr std::string_view PropertyShape = "http://www.w3.org/ns/shacl#PropertyShape";
    inline constexpr std::string_view targetClass = "http://www.w3.org/ns/shacl#targetClass";
    inline constexpr std::string_view targetNode = "http://www.w3.org/ns/shacl#targetNode";
    inline constexpr std::string_view property = "http://www.w3.org/ns/shacl#property";
    inline constexpr std::string_view path = "http://www.w3.org/ns/shacl#path";
    inline constexpr std::string_view minCount = "http://www.w3.org/ns/shacl#minCount";
    inline constexpr std::string_view maxCount = "http://www.w3.org/ns/shacl#maxCount";
    inline constexpr std::string_view datatype = "http://www.w3.org/ns/shacl#datatype";
    inline constexpr std::string_view class_ = "http://www.w3.org/ns/shacl#class";
    inline constexpr std::string_view node = "http://www.w3.org/ns/shacl#node";
    inline constexpr std::string_view nodeKind = "http://www.w3.org/ns/shacl#nodeKind";
    inline constexpr std::string_view IRI = "http://www.w3.org/ns/shacl#IRI";
    inline constexpr std::string_view BlankNode = "http://www.w3.org/ns/shacl#BlankNode";
    inline constexpr std::string_view Literal = "http://www.w3.org/ns/shacl#Literal";
    inline constexpr std::string_view BlankNodeOrIRI = "http://www.w3.org/ns/shacl#BlankNodeOrIRI";
} // namespace sh

namespace odrl
{
    inline constexpr std::string_view ns = "http://www.w3.org/ns/odrl/2/";
    inline constexpr std::string_view Policy = "http://www.w3.org/ns/odrl/2/Policy";
    inline constexpr std::string_view Set = "http://www.w3.org/ns/odrl/2/Set";
    inline constexpr std::string_view Offer = "http://www.w3.org/ns/odrl/2/Offer";
    inline constexpr std::string_view Agreement = "http://www.w3.org/ns/odrl/2/Agreement";
    inline constexpr std::string_view permission = "http://www.w3.org/ns/odrl/2/permission";
    inline constexpr std::string_view prohibition = "http://www.w3.org/ns/odrl/2/prohibition";
    inline constexpr std::string_view obligation = "http://www.w3.org/ns/odrl/2/obligation";
    inline constexpr std::string_view duty = "http://www.w3.org/ns/odrl/2/duty";
    inline constexpr std::string_view target = "http://www.w3.org/ns/odrl/2/target";
    inline constexpr std::string_view action = "http://www.w3.org/ns/odrl/2/action";
    inline constexpr std::string_view constraint = "http://www.w3.org/ns/odrl/2/constraint";
    inline constexpr std::string_view leftOperand = "http://www.w3.org/ns/odrl/2/leftOperand";
    inline constexpr std::string_view operator_ = "http://www.w3.org/ns/odrl/2/operator";
    inline constexpr std::string_view rightOperand = "http://www.w3.org/ns/odrl/2/rightOperand";
    inline constexpr std::string_view hasPolicy = "http://www.w3.org/ns/odrl/2/hasPolicy";
    inline constexpr std::string_view use = "http://www.w3.org/ns/odrl/2/use";
    inline constexpr std::string_view spatial = "http://www.w3.org/ns/odrl/2/spatial";
    inline constexpr std::string_view dateTime = "http://www.w3.org/ns/odrl/2/dateTime";
    inline constexpr std::string_view eq = "http://www.w3.org/ns/odrl/2/eq";
    inline constexpr std::string_view neq = "http://www.w3.org/ns/odrl/2/neq";
    inline constexpr std::string_view lt = "http://www.w3.org/ns/odrl/2/lt";
    inline constexpr std::string_view lteq = "http://www.w3.org/ns/odrl/2/lteq";
    inline constexpr std::string_view gt = "http://www.w3.org/ns/odrl/2/gt";
    inline constexpr std::string_view gteq = "http://www.w3.org/ns/odrl/2/gteq";
} // namespace odrl

namespace dcterms
{
    inline constexpr std::string_view ns = "http://purl.org/dc/terms/";
    inline constexpr std::string_view title = "http://purl.org/dc/terms/title";
} // namespace dcterms

namespace dcat
{
    inline constexpr std::string_view ns = "http://www.w3.org/ns/dcat#";
    inline constexpr std::string_view Dataset = "http://www.w3.org/ns/dcat#Dataset";
} // namespace dcat

namespace gndo
{
    inline constexpr std::string_view ns = "https://d-nb.info/standards/elementset/gnd#";
    inline constexpr std::string_view gndIdentifier = "https://d-nb.info/standards/elementset/gnd#gndIdentifier";
    inline constexpr std::string_view preferredNameForThePerson =
        "https://d-nb.info/standards/elementset/gnd#preferredNameForThePerson";
    inline constexpr std::string_view DifferentiatedPerson =
        "https://d-nb.info/standards/elementset/gnd#DifferentiatedPerson";
    inline constexpr std::string_view firstArtist = "https://d-nb.info/standards/elementset/gnd#firstArtist";
    inline constexpr std::string_view dateOfProduction = "https://d-nb.info/standards/elementset/gnd#dateOfProduction";
} // namespace gndo

} // namespace fairds::vocab

"""The closed set of 31 API-domain labels.

Enumeration order is the canonical tie-break order everywhere (suggestion
ranking, label matrix columns). Display names are the long forms used for
word-vector lookups; definitions document what each category covers.
"""

from __future__ import annotations

from enum import Enum


class ApiDomain(str, Enum):
    App = "App"
    APM = "APM"
    BigData = "BigData"
    Cloud = "Cloud"
    CG = "CG"
    DataStructure = "DataStructure"
    DB = "DB"
    DevOps = "DevOps"
    ErrorHandling = "ErrorHandling"
    EventHandling = "EventHandling"
    GIS = "GIS"
    IO = "IO"
    Interpreter = "Interpreter"
    I18n = "I18n"
    Logic = "Logic"
    Lang = "Lang"
    Logging = "Logging"
    ML = "ML"
    Microservices = "Microservices"
    Multimedia = "Multimedia"
    Thread = "Thread"
    NLP = "NLP"
    Network = "Network"
    OS = "OS"
    Parser = "Parser"
    Search = "Search"
    Security = "Security"
    Setup = "Setup"
    UI = "UI"
    Util = "Util"
    Test = "Test"


DISPLAY_NAMES: dict[ApiDomain, str] = {
    ApiDomain.App: "Application",
    ApiDomain.APM: "Application Performance Manager",
    ApiDomain.BigData: "Big Data",
    ApiDomain.Cloud: "Cloud",
    ApiDomain.CG: "Computer Graphics",
    ApiDomain.DataStructure: "Data Structure",
    ApiDomain.DB: "Databases",
    ApiDomain.DevOps: "DevOps",
    ApiDomain.ErrorHandling: "Error Handling",
    ApiDomain.EventHandling: "Event Handling",
    ApiDomain.GIS: "Geographic Information System",
    ApiDomain.IO: "Input Output",
    ApiDomain.Interpreter: "Interpreter",
    ApiDomain.I18n: "Internationalization",
    ApiDomain.Logic: "Logic",
    ApiDomain.Lang: "Language",
    ApiDomain.Logging: "Logging",
    ApiDomain.ML: "Machine Learning",
    ApiDomain.Microservices: "Microservices",
    ApiDomain.Multimedia: "Multimedia",
    ApiDomain.Thread: "Thread",
    ApiDomain.NLP: "Natural Language Processing",
    ApiDomain.Network: "Network",
    ApiDomain.OS: "Operating System",
    ApiDomain.Parser: "Parser",
    ApiDomain.Search: "Search",
    ApiDomain.Security: "Security",
    ApiDomain.Setup: "Setup",
    ApiDomain.UI: "User Interface",
    ApiDomain.Util: "Utility",
    ApiDomain.Test: "Test",
}

DEFINITIONS: dict[ApiDomain, str] = {
    ApiDomain.App: "Third-party applications or plugins attached to the system",
    ApiDomain.APM: "Performance monitoring and benchmarking",
    ApiDomain.BigData: "Storage and processing of very large, varied data",
    ApiDomain.Cloud: "Software and services that run on the internet",
    ApiDomain.CG: "Manipulation of visual content",
    ApiDomain.DataStructure: "Collections, lists, trees, and related structures",
    ApiDomain.DB: "Databases and metadata access",
    ApiDomain.DevOps: "Version control, continuous integration, and delivery",
    ApiDomain.ErrorHandling: "Response and recovery from error conditions",
    ApiDomain.EventHandling: "Listeners and reactions to events",
    ApiDomain.GIS: "Geographically referenced information",
    ApiDomain.IO: "Reading and writing data",
    ApiDomain.Interpreter: "Compiler and interpreter features",
    ApiDomain.I18n: "International, intercultural, and localization support",
    ApiDomain.Logic: "Framework patterns such as commands and controls",
    ApiDomain.Lang: "Core language features and conversions",
    ApiDomain.Logging: "Log registry for the application",
    ApiDomain.ML: "Building models from training data",
    ApiDomain.Microservices: "Independently deployable services and app interfaces",
    ApiDomain.Multimedia: "Text, audio, image, and video representation",
    ApiDomain.Thread: "Concurrent execution support",
    ApiDomain.NLP: "Processing and analysis of natural-language data",
    ApiDomain.Network: "Web protocols, sockets, and remote calls",
    ApiDomain.OS: "Access to and management of computer resources",
    ApiDomain.Parser: "Breaking data into recognized pieces for analysis",
    ApiDomain.Search: "Search functionality",
    ApiDomain.Security: "Cryptography and secure protocols",
    ApiDomain.Setup: "Internal application configuration",
    ApiDomain.UI: "Forms, screens, and visual controls",
    ApiDomain.Util: "General-purpose third-party helpers",
    ApiDomain.Test: "Test automation",
}

ALL_DOMAINS: tuple[ApiDomain, ...] = tuple(ApiDomain)
DOMAIN_NAMES: tuple[str, ...] = tuple(d.value for d in ALL_DOMAINS)

_BY_NAME = {d.value: d for d in ALL_DOMAINS}
_BY_NAME_LOWER = {d.value.lower(): d for d in ALL_DOMAINS}


def domain_from_name(name: str) -> ApiDomain:
    """Resolve a label name (case-insensitive); raises KeyError when unknown."""
    try:
        return _BY_NAME.get(name) or _BY_NAME_LOWER[name.strip().lower()]
    except KeyError:
        raise KeyError(f"unknown API domain: {name!r}") from None


def enumeration_index(domain: ApiDomain) -> int:
    return ALL_DOMAINS.index(domain)

# schemas package: pydantic models for universes, concepts and reports

# pmc pydantic schemas

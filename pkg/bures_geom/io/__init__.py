"""JSON schema for algebras, forms, elements and vectors."""
